"""Filtered backprojection, used as the initial image of solvers and networks.

Rows of the sinogram are ramp filtered in the frequency domain and smeared back with linear
interpolation along the detector. Fan data is cosine weighted on a virtual detector through the
rotation center and backprojected with the 1/U^2 distance weight.
"""
from typing import Literal

import numpy as np
from cachetools import LRUCache, cached

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, Sinogram
from skunroll.tomo.exceptions import GridMismatchException, OperatorParameterException
from skunroll.tomo.geometry import Geometry

TFbpFilter = Literal["ramlak", "hann"]


@cached(cache=LRUCache(maxsize=16))
def ramp_response(num_detectors: int, filter_name: TFbpFilter = "ramlak") -> NDArrayF:
    """Frequency response of the band limited ramp on a zero padded row, built from its spatial samples"""
    size = max(64, int(2 ** np.ceil(np.log2(2 * num_detectors))))
    n = np.concatenate((np.arange(1, size // 2 + 1, 2), np.arange(size // 2 - 1, 0, -2)))
    f = np.zeros(size)
    f[0] = 0.25
    f[1::2] = -1.0 / (np.pi * n) ** 2
    response = np.real(np.fft.fft(f))
    if filter_name == "hann":
        response *= 0.5 * (1.0 + np.cos(2.0 * np.pi * np.fft.fftfreq(size)))
    elif filter_name != "ramlak":
        raise OperatorParameterException("filter", filter_name, "ramlak or hann")
    response.setflags(write=False)
    return response


def _filter_rows(rows: NDArrayF, filter_name: TFbpFilter) -> NDArrayF:
    response = ramp_response(rows.shape[1], filter_name)
    padded = np.zeros((rows.shape[0], response.shape[0]))
    padded[:, :rows.shape[1]] = rows
    return np.real(np.fft.ifft(np.fft.fft(padded, axis=1) * response, axis=1))[:, :rows.shape[1]]


def _pixel_centers(geom: Geometry, grid_side: int) -> NDArrayF:
    p = geom.full_grid_side / grid_side
    return (np.arange(grid_side, dtype=np.float64) + 0.5) * p - geom.full_grid_side / 2.0


def _backproject_parallel(geom: Geometry, q: NDArrayF, grid_side: int) -> NDArrayF:
    c = _pixel_centers(geom, grid_side)
    x, y = c[None, :], c[:, None]
    t_det = geom.detector_positions()
    out = np.zeros((grid_side, grid_side))
    for row, theta in zip(q, geom.angles()):
        t = x * np.cos(theta) + y * np.sin(theta)
        out += np.interp(t, t_det, row, left=0.0, right=0.0)
    return out * (geom.angle_range / (geom.num_angles * geom.detector_spacing))


def _backproject_fan(geom: Geometry, sino: NDArrayF, grid_side: int, filter_name: TFbpFilter) -> NDArrayF:
    rs, rd = geom.source_radius, geom.detector_radius
    magnification = rs / (rs + rd)
    t_virtual = geom.detector_positions() * magnification
    spacing = geom.detector_spacing * magnification
    q = _filter_rows(sino * (rs / np.sqrt(rs ** 2 + t_virtual ** 2))[None, :], filter_name)
    c = _pixel_centers(geom, grid_side)
    x, y = c[None, :], c[:, None]
    out = np.zeros((grid_side, grid_side))
    for row, beta in zip(q, geom.angles()):
        cos, sin = np.cos(beta), np.sin(beta)
        along = x * cos + y * sin
        across = -x * sin + y * cos
        u = (rs - along) / rs
        t = rs * across / (rs - along)
        out += np.interp(t, t_virtual, row, left=0.0, right=0.0) / u ** 2
    # a full 2 pi scan sees every line twice
    return out * (geom.angle_range / (2.0 * geom.num_angles * spacing))


def fbp_reconstruct(geom: Geometry, sino: Sinogram, grid_side: int, filter: TFbpFilter = "ramlak", clip: bool = True) -> Image:
    if sino.values.shape != geom.sinogram_shape:
        raise GridMismatchException(geom.sinogram_shape, sino.values.shape)
    if grid_side < 2:
        raise OperatorParameterException("grid_side", grid_side, "integer >= 2")
    # sinograms are line integrals divided by the field of view side
    rows = sino.values.astype(np.float64) * geom.full_grid_side
    if geom.kind == "parallel":
        out = _backproject_parallel(geom, _filter_rows(rows, filter), grid_side)
    else:
        out = _backproject_fan(geom, rows, grid_side, filter)
    if clip:
        out = np.maximum(out, 0.0)
    return Image(out.astype(sino.values.dtype))
