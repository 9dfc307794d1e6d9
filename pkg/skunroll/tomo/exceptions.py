from typing import Any, Sequence, Tuple

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalValueError


class TomoException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class GeometryException(TomoException, TerminalValueError):
    def __init__(self, field: str, value: Any, reason: str) -> None:
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid geometry field {field} with value {value}: {reason}")


class GridMismatchException(TomoException, TerminalValueError):
    def __init__(self, expected: Tuple[int, ...], actual: Tuple[int, ...]) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Operator expects input of shape {expected} but got {actual}")


class SubsetPartitionException(TomoException, TerminalValueError):
    def __init__(self, reason: str, subsets: Sequence[Any] = None) -> None:
        self.reason = reason
        self.subsets = subsets
        super().__init__(f"Invalid subset partition: {reason}")


class OperatorParameterException(ParameterException, TomoException):
    pass
