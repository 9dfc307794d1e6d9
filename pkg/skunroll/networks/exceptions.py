from typing import Any

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalException, TerminalValueError


class NetworkException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class UnrollParameterException(ParameterException, NetworkException):
    pass


class IncompatibleGridsException(NetworkException, TerminalValueError):
    def __init__(self, full_side: int, sketch_side: int, factor: int) -> None:
        self.full_side = full_side
        self.sketch_side = sketch_side
        self.factor = factor
        super().__init__(f"Sketched grid {sketch_side} does not match full grid {full_side} at factor {factor}")


class LayerDivergenceException(NetworkException, TerminalException):
    def __init__(self, layer: int, block: str) -> None:
        self.layer = layer
        self.block = block
        super().__init__(f"Non finite values produced by the {block} block of layer {layer}")


class TrainingDivergenceException(NetworkException, TerminalException):
    def __init__(self, epoch: int, step: int, loss: float) -> None:
        self.epoch = epoch
        self.step = step
        self.loss = loss
        super().__init__(f"Training loss became {loss} in epoch {epoch} at step {step}")


class EmptyDatasetException(NetworkException, TerminalValueError):
    def __init__(self) -> None:
        super().__init__("Cannot train on an empty dataset")


class CheckpointNotFoundException(NetworkException, TerminalException):
    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"No checkpoint found in {path}")


class CheckpointFormatException(NetworkException, TerminalException):
    def __init__(self, path: str, key: str, value: Any) -> None:
        self.path = path
        self.key = key
        self.value = value
        super().__init__(f"Checkpoint {path} has invalid entry {key}: {value}")
