import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from skunroll.common.typing import NDArrayF, StrAny
from skunroll.tomo.exceptions import GeometryException

TGeometryKind = Literal["parallel", "fan"]


@dataclass(frozen=True)
class Geometry:
    """2D scan geometry. All lengths are in pixels of the full resolution grid.

    `full_grid_side` fixes the field of view (a square of that many full-grid pixels centered at the
    origin), so operators built for coarser grids share the same physical extent and sinogram shape.
    Fan geometries use a flat detector at `detector_radius` behind the rotation center.
    """
    kind: TGeometryKind = "parallel"
    num_angles: int = 60
    num_detectors: int = 96
    detector_spacing: float = 1.0
    full_grid_side: int = 64
    source_radius: Optional[float] = None
    detector_radius: Optional[float] = None
    angle_range: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("parallel", "fan"):
            raise GeometryException("kind", self.kind, "expected parallel or fan")
        if self.num_angles < 1:
            raise GeometryException("num_angles", self.num_angles, "at least one angle required")
        if self.num_detectors < 1:
            raise GeometryException("num_detectors", self.num_detectors, "at least one detector required")
        if not self.detector_spacing > 0:
            raise GeometryException("detector_spacing", self.detector_spacing, "must be positive")
        if self.full_grid_side < 2:
            raise GeometryException("full_grid_side", self.full_grid_side, "must be at least 2")
        if self.angle_range is None:
            object.__setattr__(self, "angle_range", math.pi if self.kind == "parallel" else 2.0 * math.pi)
        if not self.angle_range > 0:
            raise GeometryException("angle_range", self.angle_range, "must be positive")
        if self.kind == "fan":
            half_diagonal = self.full_grid_side * math.sqrt(2.0) / 2.0
            for name in ("source_radius", "detector_radius"):
                radius = getattr(self, name)
                if radius is None or not radius > half_diagonal:
                    raise GeometryException(name, radius, f"fan radii must exceed the grid half-diagonal {half_diagonal:.3f}")

    @property
    def sinogram_shape(self) -> Tuple[int, int]:
        return (self.num_angles, self.num_detectors)

    def angles(self) -> NDArrayF:
        return np.arange(self.num_angles, dtype=np.float64) * (self.angle_range / self.num_angles)

    def detector_positions(self) -> NDArrayF:
        return (np.arange(self.num_detectors, dtype=np.float64) - (self.num_detectors - 1) / 2.0) * self.detector_spacing

    def rays(self) -> Tuple[NDArrayF, NDArrayF]:
        """Returns (origins, unit directions), each of shape (num_angles * num_detectors, 2) with angle-major order"""
        angles = self.angles()[:, None]
        t = self.detector_positions()[None, :]
        cos, sin = np.cos(angles), np.sin(angles)
        if self.kind == "parallel":
            ox, oy = t * cos, t * sin
            ux, uy = np.broadcast_to(-sin, ox.shape), np.broadcast_to(cos, ox.shape)
        else:
            sx, sy = self.source_radius * cos, self.source_radius * sin
            # flat detector: -R_d e_beta + t e_perp
            dx = -self.detector_radius * cos - t * sin
            dy = -self.detector_radius * sin + t * cos
            ox, oy = np.broadcast_to(sx, dx.shape), np.broadcast_to(sy, dx.shape)
            length = np.hypot(dx - sx, dy - sy)
            ux, uy = (dx - sx) / length, (dy - sy) / length
        origins = np.stack([np.ravel(ox), np.ravel(oy)], axis=1)
        directions = np.stack([np.ravel(ux), np.ravel(uy)], axis=1)
        return origins, directions

    def as_dict(self) -> StrAny:
        return {
            "kind": self.kind,
            "num_angles": self.num_angles,
            "num_detectors": self.num_detectors,
            "detector_spacing": float(self.detector_spacing),
            "full_grid_side": self.full_grid_side,
            "source_radius": None if self.source_radius is None else float(self.source_radius),
            "detector_radius": None if self.detector_radius is None else float(self.detector_radius),
            "angle_range": float(self.angle_range),
        }

    @classmethod
    def from_dict(cls, d: StrAny) -> "Geometry":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


def fan_beam_geometry(full_grid_side: int = 64, num_angles: int = 200, num_detectors: int = 400) -> Geometry:
    """Sparse-view fan-beam setup with 2x magnification, detector wide enough for the grid diagonal"""
    radius = 2.0 * full_grid_side
    magnified_diagonal = 2.0 * full_grid_side * math.sqrt(2.0)
    return Geometry(
        kind="fan",
        num_angles=num_angles,
        num_detectors=num_detectors,
        detector_spacing=1.05 * magnified_diagonal / num_detectors,
        full_grid_side=full_grid_side,
        source_radius=radius,
        detector_radius=radius,
    )
