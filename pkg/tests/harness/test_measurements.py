import numpy as np
import pytest

from skunroll.tomo import build_operator
from skunroll.harness import NoiseSpec, PhantomSpec, generate_phantom, simulate_measurements
from skunroll.harness.exceptions import NoiseParameterException
from skunroll.harness.measurements import linearize_counts, photon_counts

from tests.utils import small_parallel_geometry


def test_noise_disabled_is_exact_projection() -> None:
    geometry = small_parallel_geometry(16, 8)
    op = build_operator(geometry, 16)
    x = generate_phantom(PhantomSpec("shepp_logan", 16))
    b = simulate_measurements(op, x, NoiseSpec(enabled=False))
    assert np.array_equal(b.values, op.apply(x.values))


def test_poisson_statistics() -> None:
    line_integral, i0, draws = 0.5, 100.0, 10000
    counts = photon_counts(np.full(draws, line_integral), i0, np.random.default_rng(0))
    expected = i0 * np.exp(-line_integral)
    standard_error = np.sqrt(expected / draws)
    assert abs(counts.mean() - expected) < 4.0 * standard_error
    # Poisson variance equals the mean
    assert counts.var() == pytest.approx(expected, rel=0.1)


def test_noisy_measurements() -> None:
    geometry = small_parallel_geometry(16, 8)
    op = build_operator(geometry, 16)
    x = generate_phantom(PhantomSpec("shepp_logan", 16))
    exact = op.apply(x.values)
    first = simulate_measurements(op, x, NoiseSpec(i0=1e4, seed=1))
    assert np.array_equal(first.values, simulate_measurements(op, x, NoiseSpec(i0=1e4, seed=1)).values)
    assert not np.array_equal(first.values, simulate_measurements(op, x, NoiseSpec(i0=1e4, seed=2)).values)
    # more photons, less noise
    low = np.linalg.norm(simulate_measurements(op, x, NoiseSpec(i0=1e2, seed=1)).values - exact)
    high = np.linalg.norm(simulate_measurements(op, x, NoiseSpec(i0=1e6, seed=1)).values - exact)
    assert high < low


def test_zero_counts_stay_finite() -> None:
    values = linearize_counts(np.array([0.0, 1.0, 100.0]), 100.0)
    assert np.all(np.isfinite(values))
    assert values[0] == values[1] == pytest.approx(np.log(100.0))
    assert values[2] == 0.0


def test_noise_validation() -> None:
    for i0 in (0.0, -1.0):
        with pytest.raises(NoiseParameterException):
            NoiseSpec(i0=i0)
