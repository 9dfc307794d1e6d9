import math
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from skunroll.common.exceptions import ParameterException
from skunroll.imaging.containers import Image
from skunroll.imaging.exceptions import ShapeMismatchException

SSIM_WINDOW = 8
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _check_pair(x: Image, ref: Image, data_range: float) -> None:
    if x.values.shape != ref.values.shape:
        raise ShapeMismatchException("image", ref.values.shape, x.values.shape)
    if not data_range > 0:
        raise ParameterException("data_range", data_range, "> 0")


def psnr(x: Image, ref: Image, data_range: float = 1.0, cap: Optional[float] = None) -> float:
    """Peak signal to noise ratio in dB. Identical images give +inf or `cap` when set."""
    _check_pair(x, ref, data_range)
    diff = x.values.astype(np.float64) - ref.values.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf if cap is None else float(cap)
    value = 10.0 * math.log10(data_range * data_range / mse)
    if cap is not None:
        return min(value, float(cap))
    return value


def ssim(x: Image, ref: Image, data_range: float = 1.0) -> float:
    """Mean structural similarity over all 8x8 uniform windows (population statistics)."""
    _check_pair(x, ref, data_range)
    if x.side < SSIM_WINDOW:
        raise ShapeMismatchException("ssim window", (SSIM_WINDOW, SSIM_WINDOW), x.values.shape)
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2
    wx = sliding_window_view(x.values.astype(np.float64), (SSIM_WINDOW, SSIM_WINDOW))
    wy = sliding_window_view(ref.values.astype(np.float64), (SSIM_WINDOW, SSIM_WINDOW))
    mu_x = wx.mean(axis=(-2, -1))
    mu_y = wy.mean(axis=(-2, -1))
    dx = wx - mu_x[..., None, None]
    dy = wy - mu_y[..., None, None]
    var_x = (dx * dx).mean(axis=(-2, -1))
    var_y = (dy * dy).mean(axis=(-2, -1))
    cov = (dx * dy).mean(axis=(-2, -1))
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))
