from fractions import Fraction

import numpy as np
import pytest

from skunroll.imaging import Image, SamplerSpec, Sinogram
from skunroll.harness.phantoms import PhantomSpec, generate_phantom
from skunroll.tomo import (CostLedger, Geometry, adjoint_discrepancy, back_project, build_operator, check_partition,
                           forward_project, partition_subsets, sketch_adjoint_error, sketch_error)
from skunroll.tomo.exceptions import GridMismatchException, OperatorParameterException, SubsetPartitionException

from tests.utils import random_image, random_sinogram, small_fan_geometry, small_parallel_geometry


@pytest.mark.parametrize("geom", [small_parallel_geometry(32, 24), small_fan_geometry(32, 24)], ids=["parallel", "fan"])
@pytest.mark.parametrize("factor", [1, 2])
def test_adjoint_is_matched(geom: Geometry, factor: int) -> None:
    op = build_operator(geom, geom.full_grid_side // factor)
    assert adjoint_discrepancy(op, 20, seed=1) <= 1e-10
    for subset in partition_subsets(op, 4):
        assert adjoint_discrepancy(subset, 5, seed=2) <= 1e-10


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["parallel", "fan"])
@pytest.mark.parametrize("grid_side", [32, 64, 128])
def test_adjoint_matrix(kind: str, grid_side: int) -> None:
    geom = small_parallel_geometry(grid_side, 60) if kind == "parallel" else small_fan_geometry(grid_side, 60)
    op = build_operator(geom, grid_side)
    assert adjoint_discrepancy(op, 100, seed=0) <= 1e-10
    for subset in partition_subsets(op, 4):
        assert adjoint_discrepancy(subset, 100, seed=0) <= 1e-10


def test_sinogram_shape_does_not_depend_on_grid() -> None:
    geom = small_parallel_geometry(16, 8)
    full = build_operator(geom, 16)
    sketch = build_operator(geom, 8)
    assert full.range_shape == sketch.range_shape == geom.sinogram_shape
    assert sketch.domain_shape == (8, 8)
    assert sketch.cost_weight == Fraction(1, 2)
    assert full.cost_weight == 1


def test_operator_is_cached() -> None:
    geom = small_parallel_geometry(16, 8)
    assert build_operator(geom, 16) is build_operator(geom, 16)
    with pytest.raises(OperatorParameterException):
        build_operator(geom, 1)


def test_axis_aligned_pixel_mass() -> None:
    geom = Geometry("parallel", 2, 32, 1.0, 16)
    op = build_operator(geom, 16)
    x = np.zeros((16, 16))
    x[8, 8] = 1.0
    profile = op.apply(x)
    # a unit pixel seen along the grid axes integrates to one pixel width over the field of view
    assert np.allclose(profile.sum(axis=1), 1.0 / 16, atol=1e-12)


def test_mass_nearly_constant_across_angles() -> None:
    geom = Geometry("parallel", 16, 48, 1.0, 32)
    op = build_operator(geom, 32)
    sino = op.apply(generate_phantom(PhantomSpec("gaussian_blob", 32)).values)
    mass = sino.sum(axis=1)
    assert np.std(mass) / np.mean(mass) < 1e-2


def test_partition_exactness() -> None:
    geom = small_parallel_geometry(16, 12)
    op = build_operator(geom, 16)
    x = random_image(16, 3).values
    s = random_sinogram(geom.sinogram_shape, 4).values
    for scheme in ("interleaved", "contiguous"):
        subsets = partition_subsets(op, 4, scheme)  # type: ignore[arg-type]
        check_partition(subsets)
        full = op.apply(x)
        for subset in subsets:
            assert np.array_equal(subset.apply(x), full[list(subset.angles)])
        summed = sum(subset.apply_adjoint(s[list(subset.angles)]) for subset in subsets)
        assert np.allclose(summed, op.apply_adjoint(s), rtol=0.0, atol=1e-12)
    assert partition_subsets(op, 4)[1].angles == (1, 5, 9)
    assert partition_subsets(op, 4, "contiguous")[1].angles == (3, 4, 5)


def test_single_subset_is_full_operator() -> None:
    op = build_operator(small_parallel_geometry(16, 8), 16)
    assert partition_subsets(op, 1) == [op]


def test_invalid_partitions() -> None:
    op = build_operator(small_parallel_geometry(16, 8), 16)
    with pytest.raises(OperatorParameterException):
        partition_subsets(op, 0)
    with pytest.raises(OperatorParameterException):
        partition_subsets(op, 9)
    with pytest.raises(OperatorParameterException):
        partition_subsets(op, 2, "random")  # type: ignore[arg-type]
    subsets = partition_subsets(op, 4)
    with pytest.raises(SubsetPartitionException):
        check_partition(subsets[:3])
    with pytest.raises(SubsetPartitionException):
        check_partition(subsets + [subsets[0]])
    with pytest.raises(SubsetPartitionException):
        check_partition([])
    with pytest.raises(SubsetPartitionException):
        subsets[0].restrict((0,))


def test_cost_accounting() -> None:
    geom = small_parallel_geometry(16, 8)
    subset = partition_subsets(build_operator(geom, 8), 4)[2]
    assert subset.cost_weight == Fraction(1, 8)
    ledger = CostLedger()
    x = random_image(8).values
    y = random_sinogram(subset.range_shape).values
    for _ in range(3):
        subset.apply(x, ledger)
    for _ in range(2):
        subset.apply_adjoint(y, ledger)
    assert ledger.accumulated_cost == 5 * Fraction(1, 8)
    assert (ledger.num_forward, ledger.num_adjoint) == (3, 2)
    # products without a ledger stay uncharged
    subset.apply(x)
    assert ledger.accumulated_cost == Fraction(5, 8)


def test_container_products() -> None:
    geom = small_parallel_geometry(16, 8)
    op = build_operator(geom, 16)
    ledger = CostLedger()
    sino = forward_project(op, random_image(16), ledger)
    assert isinstance(sino, Sinogram)
    img = back_project(op, sino, ledger)
    assert isinstance(img, Image)
    assert ledger.accumulated_cost == 2


def test_grid_mismatch() -> None:
    op = build_operator(small_parallel_geometry(16, 8), 16)
    with pytest.raises(GridMismatchException):
        op.apply(np.zeros((8, 8)))
    with pytest.raises(GridMismatchException):
        op.apply_adjoint(np.zeros((8, 8)))


def test_float32_products_keep_dtype() -> None:
    op = build_operator(small_parallel_geometry(16, 8), 16)
    y = op.apply(np.ones((16, 16), dtype=np.float32))
    assert y.dtype == np.float32
    assert op.apply_adjoint(y).dtype == np.float32


def test_sketch_errors_small_on_smooth_images() -> None:
    geom = small_parallel_geometry(32, 16)
    full = build_operator(geom, 32)
    sketch = build_operator(geom, 16)
    blob = generate_phantom(PhantomSpec("gaussian_blob", 32))
    error = sketch_error(full, sketch, SamplerSpec(2), blob)
    assert 0.0 < error < 0.1
    adjoint_error = sketch_adjoint_error(full, sketch, SamplerSpec(2), Sinogram(full.apply(blob.values)))
    assert 0.0 < adjoint_error < 0.2


@pytest.mark.slow
def test_sketch_errors_on_default_geometry() -> None:
    geom = Geometry()
    full = build_operator(geom, 64)
    sketch = build_operator(geom, 32)
    blob = generate_phantom(PhantomSpec("gaussian_blob", 64))
    assert sketch_error(full, sketch, SamplerSpec(2), blob) <= 0.05
    y = Sinogram(full.apply(blob.values))
    assert sketch_adjoint_error(full, sketch, SamplerSpec(2), y) <= 0.10
