from typing import Tuple

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalValueError


class ProxException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class ProxParameterException(ParameterException, ProxException):
    pass


class ProxShapeException(ProxException, TerminalValueError):
    def __init__(self, expected: Tuple[int, ...], actual: Tuple[int, ...]) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Proximal operator expects shape {expected} but got {actual}")


class UnknownRegularizerException(ProxException, TerminalValueError):
    def __init__(self, kind: str) -> None:
        self.kind = kind
        super().__init__(f"Regularizer kind {kind} is not known")
