from dataclasses import dataclass

import numpy as np

from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, Sinogram
from skunroll.tomo.operators import LinearOperatorBase
from skunroll.harness.exceptions import NoiseParameterException


@dataclass(frozen=True)
class NoiseSpec:
    """Poisson photon statistics with `i0` expected counts per unattenuated ray"""
    i0: float = 1e5
    seed: int = 0
    enabled: bool = True

    def __post_init__(self) -> None:
        if not self.i0 > 0:
            raise NoiseParameterException("i0", self.i0, "> 0")


def photon_counts(line_integrals: NDArrayF, i0: float, rng: np.random.Generator) -> NDArrayF:
    """Poisson draw of detected photons, expected value i0 * exp(-line_integral)"""
    return rng.poisson(i0 * np.exp(-line_integrals)).astype(np.float64)


def linearize_counts(counts: NDArrayF, i0: float) -> NDArrayF:
    # zero counts would give an infinite log, count them as a single photon
    return -np.log(np.maximum(counts, 1.0) / i0)


def simulate_measurements(op: LinearOperatorBase, x: Image, noise: NoiseSpec) -> Sinogram:
    """Linearized noisy sinogram -log(counts / i0). With noise disabled the exact projection A x is returned."""
    ax = op.apply(x.values)
    if not noise.enabled:
        return Sinogram(ax)
    counts = photon_counts(ax.astype(np.float64), noise.i0, np.random.default_rng(noise.seed))
    return Sinogram(linearize_counts(counts, noise.i0).astype(x.values.dtype))
