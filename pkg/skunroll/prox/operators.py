"""Proximal maps of the data term conjugate and of the supported regularizers.

Public functions take and return image containers. The underscore prefixed array kernels are
what the iterative solvers call in their inner loops.
"""
from typing import List, Optional, Tuple

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, Sinogram
from skunroll.prox.exceptions import ProxParameterException, ProxShapeException
from skunroll.prox.terms import DataTerm, Regularizer

# squared norm bound of the 2D forward difference operator
_TV_STEP = 1.0 / 8.0


def _check_shape(expected: Tuple[int, ...], actual: Tuple[int, ...]) -> None:
    if expected != actual:
        raise ProxShapeException(expected, actual)


def _prox_conjugate_data(b: NDArrayF, v: NDArrayF, sigma: float) -> NDArrayF:
    return (v - sigma * b) / (1.0 + sigma)


def prox_conjugate_data(term: DataTerm, v: Sinogram, sigma: float) -> Sinogram:
    if not sigma > 0:
        raise ProxParameterException("sigma", sigma, "> 0")
    _check_shape(term.data.values.shape, v.values.shape)
    return Sinogram(_prox_conjugate_data(term.data.values, v.values, sigma))


def _soft_threshold(x: NDArrayF, lam: float) -> NDArrayF:
    return np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)


def soft_threshold(x: Image, lam: float) -> Image:
    if lam < 0:
        raise ProxParameterException("lambda", lam, ">= 0")
    return Image(_soft_threshold(x.values, lam))


def prox_box(x: Image, lo: float, hi: float) -> Image:
    if lo > hi:
        raise ProxParameterException("bounds", (lo, hi), "lo <= hi")
    return Image(np.clip(x.values, lo, hi))


def gradient(u: NDArrayF) -> NDArrayF:
    """Forward differences stacked as (2, h, w), the difference past the last row/column is zero"""
    g = np.zeros((2,) + u.shape, dtype=u.dtype)
    g[0, :-1, :] = u[1:, :] - u[:-1, :]
    g[1, :, :-1] = u[:, 1:] - u[:, :-1]
    return g


def gradient_adjoint(q: NDArrayF) -> NDArrayF:
    """Transpose of `gradient` (negative divergence)"""
    out = np.zeros(q.shape[1:], dtype=q.dtype)
    out[:-1, :] -= q[0, :-1, :]
    out[1:, :] += q[0, :-1, :]
    out[:, :-1] -= q[1, :, :-1]
    out[:, 1:] += q[1, :, :-1]
    return out


def tv_norm(u: NDArrayF) -> float:
    """Isotropic total variation"""
    g = gradient(u)
    return float(np.sum(np.sqrt(g[0] ** 2 + g[1] ** 2)))


def _project_dual_ball(q: NDArrayF, lam: float) -> NDArrayF:
    magnitude = np.sqrt(q[0] ** 2 + q[1] ** 2)
    return q / np.maximum(1.0, magnitude / lam)[None, :, :]


def _prox_tv(x: NDArrayF, lam: float, inner_iters: int, q: Optional[NDArrayF] = None,
             objectives: Optional[List[float]] = None) -> Tuple[NDArrayF, NDArrayF]:
    """Dual projected gradient on min_{|q| <= lam} 1/2 ||x - grad^T q||^2, returns (x - grad^T q, q).

    Passing the `q` of a previous call warm starts the inner loop.
    """
    if lam == 0:
        return x.copy(), np.zeros((2,) + x.shape, dtype=x.dtype)
    q = np.zeros((2,) + x.shape, dtype=x.dtype) if q is None else q
    u = x - gradient_adjoint(q)
    if objectives is not None:
        objectives.append(0.5 * float(np.sum(u ** 2)))
    for _ in range(inner_iters):
        q = _project_dual_ball(q + _TV_STEP * gradient(u), lam)
        u = x - gradient_adjoint(q)
        if objectives is not None:
            objectives.append(0.5 * float(np.sum(u ** 2)))
    return u, q


def _check_tv_params(lam: float, inner_iters: int) -> None:
    if lam < 0:
        raise ProxParameterException("lambda", lam, ">= 0")
    if inner_iters < 1:
        raise ProxParameterException("inner_iters", inner_iters, ">= 1")


def prox_tv(x: Image, lam: float, inner_iters: int) -> Image:
    """Approximate minimizer of 1/2 ||u - x||^2 + lam * TV(u)"""
    _check_tv_params(lam, inner_iters)
    u, _ = _prox_tv(x.values, lam, inner_iters)
    return Image(u)


def prox_tv_dual_objectives(x: Image, lam: float, inner_iters: int) -> List[float]:
    """Inner loop dual objective 1/2 ||x - grad^T q_k||^2 for k = 0..inner_iters, non-increasing in k"""
    _check_tv_params(lam, inner_iters)
    objectives: List[float] = []
    _prox_tv(x.values, lam, inner_iters, objectives=objectives)
    return objectives


def _prox_regularizer(reg: Regularizer, x: NDArrayF, tau: float, q: Optional[NDArrayF] = None) -> Tuple[NDArrayF, Optional[NDArrayF]]:
    """prox of tau * r, returns the TV dual variable (or None) for warm starts"""
    if reg.kind == "l1":
        return _soft_threshold(x, tau * reg.strength), None
    if reg.kind == "tv":
        return _prox_tv(x, tau * reg.strength, reg.inner_iterations, q)
    if reg.kind == "box":
        lo, hi = reg.bounds
        return np.clip(x, lo, hi), None
    return x.copy(), None


def prox_regularizer(reg: Regularizer, x: Image, tau: float) -> Image:
    if not tau > 0:
        raise ProxParameterException("tau", tau, "> 0")
    u, _ = _prox_regularizer(reg, x.values, tau)
    return Image(u)


def _regularizer_value(reg: Regularizer, x: NDArrayF) -> float:
    if reg.kind == "l1":
        return reg.strength * float(np.sum(np.abs(x)))
    if reg.kind == "tv":
        return reg.strength * tv_norm(x)
    if reg.kind == "box":
        lo, hi = reg.bounds
        # indicator, tolerant to round-off of clipped iterates
        return 0.0 if np.all((x >= lo - 1e-12) & (x <= hi + 1e-12)) else float("inf")
    return 0.0


def regularizer_value(reg: Regularizer, x: Image) -> float:
    return _regularizer_value(reg, x.values)


def data_value(term: DataTerm, projection: Sinogram) -> float:
    _check_shape(term.data.values.shape, projection.values.shape)
    return 0.5 * float(np.sum((projection.values - term.data.values) ** 2))
