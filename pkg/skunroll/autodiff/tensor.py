"""Reverse mode differentiation on a recorded tape.

Operations in `skunroll.autodiff.ops` append a node to the innermost active `Tape` whenever one of
their inputs requires a gradient. `backward` walks the nodes in reverse and accumulates gradients.
"""
import threading
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.autodiff.exceptions import DoubleBackwardException, NonScalarLossException, TensorValueException

TBackwardFn = Callable[[NDArrayF], Sequence[Optional[NDArrayF]]]


class Tensor:
    """Array of values that can carry a gradient. Networks use (channels, height, width) layouts."""

    def __init__(self, values: NDArrayF, requires_grad: bool = False, name: str = None) -> None:
        arr = np.asarray(values)
        if not np.issubdtype(arr.dtype, np.floating):
            raise TensorValueException(name or "<unnamed>", f"expected floating values, got {arr.dtype}")
        if not np.all(np.isfinite(arr)):
            raise TensorValueException(name or "<unnamed>", "values must be finite")
        self.values = arr
        self.requires_grad = requires_grad
        self.name = name
        self.grad: Optional[NDArrayF] = None

    @classmethod
    def _result(cls, values: NDArrayF, requires_grad: bool) -> "Tensor":
        # outputs of operations skip validation, non finite values are detected by callers
        t = cls.__new__(cls)
        t.values = values
        t.requires_grad = requires_grad
        t.name = None
        t.grad = None
        return t

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.values.shape)

    @property
    def dtype(self) -> np.dtype:  # type: ignore[type-arg]
        return self.values.dtype

    def __repr__(self) -> str:
        name = f" {self.name}" if self.name else ""
        return f"Tensor{name}(shape={self.shape}, dtype={self.values.dtype}, requires_grad={self.requires_grad})"


class _Node:
    __slots__ = ("output", "inputs", "backward_fn")

    def __init__(self, output: Tensor, inputs: Sequence[Tensor], backward_fn: TBackwardFn) -> None:
        self.output = output
        self.inputs = inputs
        self.backward_fn = backward_fn


_ACTIVE = threading.local()


def _active_tapes() -> List["Tape"]:
    if not hasattr(_ACTIVE, "tapes"):
        _ACTIVE.tapes = []
    return _ACTIVE.tapes  # type: ignore[no-any-return]


class Tape:
    """Records operations in execution order while used as a context manager"""

    def __init__(self) -> None:
        self.nodes: List[_Node] = []
        self.consumed = False

    def __enter__(self) -> "Tape":
        _active_tapes().append(self)
        return self

    def __exit__(self, *exc: object) -> None:
        _active_tapes().remove(self)

    def __len__(self) -> int:
        return len(self.nodes)


def record(values: NDArrayF, inputs: Sequence[Tensor], backward_fn: TBackwardFn) -> Tensor:
    """Wraps an operation result and records it on the active tape if any input needs a gradient"""
    tapes = _active_tapes()
    needs_grad = bool(tapes) and any(t.requires_grad for t in inputs)
    out = Tensor._result(values, needs_grad)
    if needs_grad:
        tapes[-1].nodes.append(_Node(out, inputs, backward_fn))
    return out


def backward(tape: Tape, loss: Tensor, wrt: Sequence[Tensor] = ()) -> List[NDArrayF]:
    """Gradients of a scalar `loss` with respect to `wrt`, zero for tensors the loss does not depend on.

    Gradients of every leaf that requires one are also stored in its `grad` attribute.
    """
    if loss.values.size != 1:
        raise NonScalarLossException(loss.shape)
    if tape.consumed:
        raise DoubleBackwardException()
    tape.consumed = True

    grads: Dict[int, NDArrayF] = {id(loss): np.ones_like(loss.values)}
    leaves: Dict[int, Tensor] = {}
    for node in reversed(tape.nodes):
        g = grads.pop(id(node.output), None)
        if g is None:
            continue
        for inp, gi in zip(node.inputs, node.backward_fn(g)):
            if gi is None or not inp.requires_grad:
                continue
            key = id(inp)
            grads[key] = grads[key] + gi if key in grads else gi
            leaves[key] = inp
    for key, t in leaves.items():
        if key in grads:
            t.grad = grads[key]
    if loss.requires_grad and not tape.nodes:
        loss.grad = grads[id(loss)]
    return [grads.get(id(t), np.zeros_like(t.values)) for t in wrt]
