from typing import Callable, List, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from skunroll.common.typing import NDArrayF
from skunroll.autodiff.exceptions import TensorShapeException
from skunroll.autodiff.tensor import Tensor, record

TArrayMap = Callable[[NDArrayF], NDArrayF]


def conv2d(x: Tensor, kernel: Tensor, bias: Tensor) -> Tensor:
    """Stride 1 cross-correlation with zero padding that keeps the spatial size.

    `x` is (c_in, h, w), `kernel` is (c_out, c_in, k, k) with odd k and `bias` is (c_out,).
    """
    c_out, c_in, k, k2 = kernel.shape
    if x.values.ndim != 3 or x.shape[0] != c_in:
        raise TensorShapeException("conv2d input", (c_in, -1, -1), x.shape)
    if k != k2 or k % 2 == 0:
        raise TensorShapeException("conv2d kernel", (c_out, c_in, k, k), kernel.shape)
    if bias.shape != (c_out,):
        raise TensorShapeException("conv2d bias", (c_out,), bias.shape)
    pad = k // 2
    padded = np.pad(x.values, ((0, 0), (pad, pad), (pad, pad)))
    windows = sliding_window_view(padded, (k, k), axis=(1, 2))
    out = np.tensordot(kernel.values, windows, axes=([1, 2, 3], [0, 3, 4])) + bias.values[:, None, None]

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        g_windows = sliding_window_view(np.pad(g, ((0, 0), (pad, pad), (pad, pad))), (k, k), axis=(1, 2))
        flipped = kernel.values[:, :, ::-1, ::-1]
        dx = np.tensordot(g_windows, flipped, axes=([0, 3, 4], [0, 2, 3])).transpose(2, 0, 1)
        dk = np.tensordot(g, windows, axes=([1, 2], [1, 2]))
        return [dx, dk, g.sum(axis=(1, 2))]

    return record(out, (x, kernel, bias), _backward)


def prelu(x: Tensor, slope: Tensor) -> Tensor:
    """max(x, 0) + slope * min(x, 0) with a single trainable slope"""
    positive = x.values > 0
    a = slope.values
    out = np.where(positive, x.values, a * x.values)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g * np.where(positive, 1.0, a).astype(g.dtype), np.asarray(np.sum(g * np.where(positive, 0.0, x.values)), dtype=a.dtype).reshape(a.shape)]

    return record(out, (x, slope), _backward)


def concat(tensors: Sequence[Tensor]) -> Tensor:
    """Stacks along the channel axis"""
    spatial = tensors[0].shape[1:]
    for t in tensors:
        if t.shape[1:] != spatial:
            raise TensorShapeException("concat", (-1,) + spatial, t.shape)
    sizes = [t.shape[0] for t in tensors]
    out = np.concatenate([t.values for t in tensors], axis=0)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return np.split(g, np.cumsum(sizes)[:-1], axis=0)  # type: ignore[no-any-return]

    return record(out, tuple(tensors), _backward)


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise TensorShapeException("add", a.shape, b.shape)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g, g]

    return record(a.values + b.values, (a, b), _backward)


def sub(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise TensorShapeException("sub", a.shape, b.shape)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g, -g]

    return record(a.values - b.values, (a, b), _backward)


def scale(x: Tensor, s: Tensor) -> Tensor:
    """Multiplies every entry of `x` by the scalar tensor `s`"""
    if s.values.size != 1:
        raise TensorShapeException("scale factor", (), s.shape)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g * s.values, np.asarray(np.sum(g * x.values), dtype=s.values.dtype).reshape(s.shape)]

    return record(x.values * s.values, (x, s), _backward)


def channel(x: Tensor, index: int) -> Tensor:
    """Channel `index` of `x` keeping the channel axis"""
    if not 0 <= index < x.shape[0]:
        raise TensorShapeException("channel", (index + 1,), x.shape)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        dx = np.zeros_like(x.values)
        dx[index] = g[0]
        return [dx]

    return record(x.values[index:index + 1], (x,), _backward)


def linear_op_node(op_apply: TArrayMap, op_adjoint_apply: TArrayMap, x: Tensor) -> Tensor:
    """Applies a linear map to every channel of `x`, backpropagating through its supplied adjoint"""
    out = np.stack([op_apply(c) for c in x.values], axis=0)

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        dx = np.stack([op_adjoint_apply(c) for c in g], axis=0)
        if dx.shape != x.shape:
            raise TensorShapeException("adjoint of linear operator", x.shape, dx.shape)
        return [dx]

    return record(out, (x,), _backward)


def total(x: Tensor) -> Tensor:
    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [np.broadcast_to(g, x.values.shape).copy()]

    return record(np.asarray(np.sum(x.values), dtype=x.values.dtype), (x,), _backward)


def half_sq_norm(x: Tensor) -> Tensor:
    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g * x.values]

    return record(np.asarray(0.5 * np.sum(x.values ** 2), dtype=x.values.dtype), (x,), _backward)


def mse(x: Tensor, target: NDArrayF) -> Tensor:
    """Mean squared error against a constant target"""
    if x.shape != target.shape:
        raise TensorShapeException("mse", target.shape, x.shape)
    diff = x.values - target

    def _backward(g: NDArrayF) -> List[NDArrayF]:
        return [g * (2.0 / diff.size) * diff]

    return record(np.asarray(np.mean(diff ** 2), dtype=x.values.dtype), (x,), _backward)
