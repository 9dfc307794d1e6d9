from dataclasses import dataclass
from typing import Literal

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.imaging.exceptions import InvalidContainerException, SamplerParameterException

TSamplerMethod = Literal["bilinear"]


def _freeze_values(container: str, values: NDArrayF) -> NDArrayF:
    arr = np.array(values, copy=True)
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    if arr.ndim != 2:
        raise InvalidContainerException(container, "values must be a 2D array", arr.shape)
    if arr.size == 0:
        raise InvalidContainerException(container, "values cannot be empty", arr.shape)
    if not np.all(np.isfinite(arr)):
        raise InvalidContainerException(container, "values must be finite", arr.shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Image:
    """Square grid of attenuation values, row-major. Values are copied and made read-only."""
    values: NDArrayF

    def __post_init__(self) -> None:
        arr = _freeze_values("Image", self.values)
        if arr.shape[0] != arr.shape[1]:
            raise InvalidContainerException("Image", "only square grids are supported", arr.shape)
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def side(self) -> int:
        return self.width

    @classmethod
    def zeros(cls, side: int, dtype: str = "float64") -> "Image":
        return cls(np.zeros((side, side), dtype=dtype))


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Line integrals indexed by (angle, detector bin)."""
    values: NDArrayF

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _freeze_values("Sinogram", self.values))

    @property
    def num_angles(self) -> int:
        return int(self.values.shape[0])

    @property
    def num_detectors(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class SamplerSpec:
    factor: int = 2
    method: TSamplerMethod = "bilinear"

    def __post_init__(self) -> None:
        if int(self.factor) != self.factor or self.factor < 1:
            raise SamplerParameterException("factor", self.factor, "integer >= 1")
        if self.method != "bilinear":
            raise SamplerParameterException("method", self.method, "bilinear")
