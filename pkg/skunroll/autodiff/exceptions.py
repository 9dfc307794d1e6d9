from typing import Tuple

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalValueError


class AutodiffException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class TensorValueException(AutodiffException, TerminalValueError):
    def __init__(self, name: str, reason: str) -> None:
        self.name = name
        self.reason = reason
        super().__init__(f"Tensor {name} is invalid: {reason}")


class TensorShapeException(AutodiffException, TerminalValueError):
    def __init__(self, op: str, expected: Tuple[int, ...], actual: Tuple[int, ...]) -> None:
        self.op = op
        self.expected = expected
        self.actual = actual
        super().__init__(f"{op} expected shape {expected} but got {actual}")


class NonScalarLossException(AutodiffException, TerminalValueError):
    def __init__(self, shape: Tuple[int, ...]) -> None:
        self.shape = shape
        super().__init__(f"Backward requires a scalar loss, got shape {shape}")


class DoubleBackwardException(AutodiffException):
    def __init__(self) -> None:
        super().__init__("Backward was already run on this tape, record a new one")


class OptimizerParameterException(ParameterException, AutodiffException):
    pass
