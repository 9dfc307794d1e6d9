"""Fixed bilinear sketch (S) and upsample (U) operators.

Both are separable: a 2D resample is `M @ X @ M.T` with a 1D interpolation matrix `M` per axis.
Sample points are half-pixel centered, so downsampling by 2 averages 2x2 blocks and upsampling
replicates edge values beyond the outermost source centers. Transposes are exposed for use as
exact adjoints in differentiable pipelines.
"""
import numpy as np
from cachetools import LRUCache, cached

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, SamplerSpec
from skunroll.imaging.exceptions import DimensionException, SamplerParameterException


def _bilinear_matrix(coords: NDArrayF, n_source: int) -> NDArrayF:
    m = np.zeros((coords.shape[0], n_source), dtype=np.float64)
    if n_source == 1:
        m[:, 0] = 1.0
        return m
    u = np.clip(coords, 0.0, n_source - 1.0)
    i0 = np.minimum(np.floor(u).astype(np.int64), n_source - 2)
    t = u - i0
    rows = np.arange(coords.shape[0])
    m[rows, i0] += 1.0 - t
    m[rows, i0 + 1] += t
    return m


@cached(cache=LRUCache(maxsize=64))
def downsample_matrix(n_source: int, factor: int) -> NDArrayF:
    if n_source % factor != 0:
        raise DimensionException(n_source, factor)
    i = np.arange(n_source // factor, dtype=np.float64)
    m = _bilinear_matrix((i + 0.5) * factor - 0.5, n_source)
    m.setflags(write=False)
    return m


@cached(cache=LRUCache(maxsize=64))
def upsample_matrix(n_source: int, factor: int) -> NDArrayF:
    i = np.arange(n_source * factor, dtype=np.float64)
    m = _bilinear_matrix((i + 0.5) / factor - 0.5, n_source)
    m.setflags(write=False)
    return m


def _check_factor(factor: int) -> None:
    if factor < 1:
        raise SamplerParameterException("factor", factor, "integer >= 1")


def _separable(m: NDArrayF, values: NDArrayF) -> NDArrayF:
    return np.asarray(m @ values @ m.T, dtype=values.dtype)


def downsample_array(values: NDArrayF, factor: int) -> NDArrayF:
    _check_factor(factor)
    if factor == 1:
        return values.copy()
    return _separable(downsample_matrix(values.shape[0], factor), values)


def downsample_adjoint_array(values: NDArrayF, factor: int) -> NDArrayF:
    """Transpose of `downsample_array`, maps a coarse grid back onto the fine one"""
    _check_factor(factor)
    if factor == 1:
        return values.copy()
    m = downsample_matrix(values.shape[0] * factor, factor)
    return np.asarray(m.T @ values @ m, dtype=values.dtype)


def upsample_array(values: NDArrayF, factor: int) -> NDArrayF:
    _check_factor(factor)
    if factor == 1:
        return values.copy()
    return _separable(upsample_matrix(values.shape[0], factor), values)


def upsample_adjoint_array(values: NDArrayF, factor: int) -> NDArrayF:
    _check_factor(factor)
    if factor == 1:
        return values.copy()
    if values.shape[0] % factor != 0:
        raise DimensionException(values.shape[0], factor)
    m = upsample_matrix(values.shape[0] // factor, factor)
    return np.asarray(m.T @ values @ m, dtype=values.dtype)


def downsample(img: Image, spec: SamplerSpec) -> Image:
    return Image(downsample_array(img.values, spec.factor))


def upsample(img: Image, spec: SamplerSpec) -> Image:
    return Image(upsample_array(img.values, spec.factor))
