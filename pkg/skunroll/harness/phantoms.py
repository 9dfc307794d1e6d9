"""Synthetic ground truth images on the unit field of view [-1, 1]^2, row 0 at the top."""
from dataclasses import dataclass
from typing import Literal, Sequence, Tuple

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image
from skunroll.harness.exceptions import PhantomParameterException

TPhantomKind = Literal["shepp_logan", "random_ellipses", "disk", "gaussian_blob"]

# intensity, semi axes a and b, center x and y, rotation in degrees
SHEPP_LOGAN_ELLIPSES: Tuple[Tuple[float, float, float, float, float, float], ...] = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
)
DISK_RADIUS = 0.5
BLOB_WIDTH = 0.25


@dataclass(frozen=True)
class PhantomSpec:
    kind: TPhantomKind = "random_ellipses"
    grid_side: int = 64
    num_ellipses: int = 8
    seed: int = 0
    value_range: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        if self.kind not in ("shepp_logan", "random_ellipses", "disk", "gaussian_blob"):
            raise PhantomParameterException("kind", self.kind, "shepp_logan, random_ellipses, disk or gaussian_blob")
        if self.grid_side < 2:
            raise PhantomParameterException("grid_side", self.grid_side, ">= 2")
        if self.num_ellipses < 0:
            raise PhantomParameterException("num_ellipses", self.num_ellipses, ">= 0")
        lo, hi = self.value_range
        if lo > hi:
            raise PhantomParameterException("value_range", self.value_range, "lo <= hi")


def _coordinates(grid_side: int) -> Tuple[NDArrayF, NDArrayF]:
    c = (np.arange(grid_side, dtype=np.float64) + 0.5) / grid_side * 2.0 - 1.0
    return c[None, :], -c[:, None]


def _ellipses(grid_side: int, ellipses: Sequence[Tuple[float, float, float, float, float, float]]) -> NDArrayF:
    x, y = _coordinates(grid_side)
    out = np.zeros((grid_side, grid_side))
    for intensity, a, b, x0, y0, phi in ellipses:
        cos, sin = np.cos(np.deg2rad(phi)), np.sin(np.deg2rad(phi))
        u = (x - x0) * cos + (y - y0) * sin
        v = -(x - x0) * sin + (y - y0) * cos
        out[(u / a) ** 2 + (v / b) ** 2 <= 1.0] += intensity
    return out


def _random_ellipses(spec: PhantomSpec) -> NDArrayF:
    rng = np.random.default_rng(spec.seed)
    ellipses = []
    for _ in range(spec.num_ellipses):
        ellipses.append((
            float(rng.uniform(0.1, 0.6)),
            float(rng.uniform(0.05, 0.45)),
            float(rng.uniform(0.05, 0.45)),
            float(rng.uniform(-0.5, 0.5)),
            float(rng.uniform(-0.5, 0.5)),
            float(rng.uniform(0.0, 180.0)),
        ))
    return _ellipses(spec.grid_side, ellipses)


def _disk(grid_side: int) -> NDArrayF:
    x, y = _coordinates(grid_side)
    # linear ramp one pixel wide on each side of the rim
    width = 2.0 / grid_side
    return np.clip((DISK_RADIUS - np.sqrt(x ** 2 + y ** 2)) / (2.0 * width) + 0.5, 0.0, 1.0)


def _gaussian_blob(grid_side: int) -> NDArrayF:
    x, y = _coordinates(grid_side)
    return np.exp(-(x ** 2 + y ** 2) / (2.0 * BLOB_WIDTH ** 2))


def generate_phantom(spec: PhantomSpec) -> Image:
    if spec.kind == "shepp_logan":
        values = _ellipses(spec.grid_side, SHEPP_LOGAN_ELLIPSES)
    elif spec.kind == "random_ellipses":
        values = _random_ellipses(spec)
    elif spec.kind == "disk":
        values = _disk(spec.grid_side)
    else:
        values = _gaussian_blob(spec.grid_side)
    return Image(np.clip(values, *spec.value_range))
