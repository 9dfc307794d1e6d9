import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from skunroll.imaging.containers import Sinogram
from skunroll.prox.exceptions import ProxParameterException, UnknownRegularizerException

TDataTermKind = Literal["least_squares"]
TRegularizerKind = Literal["l1", "tv", "box", "zero"]


@dataclass(frozen=True, eq=False)
class DataTerm:
    """f_b(h) = 1/2 ||h - b||^2, anchored to the measured sinogram b"""
    data: Sinogram
    kind: TDataTermKind = "least_squares"

    def __post_init__(self) -> None:
        if self.kind != "least_squares":
            raise ProxParameterException("kind", self.kind, "least_squares")


@dataclass(frozen=True)
class Regularizer:
    kind: TRegularizerKind = "zero"
    strength: float = 0.0
    bounds: Optional[Tuple[float, float]] = None
    # dual projected gradient steps per TV prox
    inner_iterations: int = 20

    def __post_init__(self) -> None:
        if self.kind not in ("l1", "tv", "box", "zero"):
            raise UnknownRegularizerException(self.kind)
        if not math.isfinite(self.strength) or self.strength < 0:
            raise ProxParameterException("strength", self.strength, "finite value >= 0")
        if self.inner_iterations < 1:
            raise ProxParameterException("inner_iterations", self.inner_iterations, ">= 1")
        if self.kind == "box":
            if self.bounds is None:
                object.__setattr__(self, "bounds", (0.0, 1.0))
            lo, hi = self.bounds
            if lo > hi:
                raise ProxParameterException("bounds", self.bounds, "lo <= hi")
