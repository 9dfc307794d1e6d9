from typing import Any, Tuple

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalValueError


class ImagingException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class DimensionException(ImagingException, TerminalValueError):
    def __init__(self, side: int, factor: int) -> None:
        self.side = side
        self.factor = factor
        super().__init__(f"Image side {side} is not divisible by sampling factor {factor}")


class ShapeMismatchException(ImagingException, TerminalValueError):
    def __init__(self, what: str, expected: Tuple[int, ...], actual: Tuple[int, ...]) -> None:
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} expected shape {expected} but got {actual}")


class InvalidContainerException(ImagingException, TerminalValueError):
    def __init__(self, container: str, reason: str, shape: Any = None) -> None:
        self.container = container
        self.reason = reason
        self.shape = shape
        super().__init__(f"Cannot create {container} with shape {shape}: {reason}")


class SamplerParameterException(ParameterException, ImagingException):
    pass


class ArrayEncodingException(ParameterException, ImagingException):
    pass


class RawFormatException(ImagingException):
    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"File {path} is not a valid USKD raw array: {reason}")
