import numpy as np
import pytest

from skunroll.imaging import Image, SamplerSpec, downsample, upsample
from skunroll.imaging.exceptions import DimensionException
from skunroll.imaging.sampling import (downsample_adjoint_array, downsample_array, upsample_adjoint_array,
                                       upsample_array)


def test_downsample_block_averages() -> None:
    img = Image(np.repeat(np.arange(4.0)[:, None], 4, axis=1))
    out = downsample(img, SamplerSpec(2))
    assert np.allclose(out.values, [[0.5, 0.5], [2.5, 2.5]], atol=1e-15)


def test_upsample_bilinear_with_replicated_edges() -> None:
    img = Image(np.array([[0.0, 1.0], [2.0, 3.0]]))
    out = upsample(img, SamplerSpec(2)).values
    assert out.shape == (4, 4)
    assert np.allclose(out[1:3, 1:3], [[0.75, 1.25], [1.75, 2.25]], atol=1e-15)
    assert (out[0, 0], out[0, 3], out[3, 0], out[3, 3]) == (0.0, 1.0, 2.0, 3.0)


def test_downsample_requires_divisible_side() -> None:
    with pytest.raises(DimensionException):
        downsample(Image(np.zeros((5, 5))), SamplerSpec(2))


@pytest.mark.parametrize("factor", [1, 2, 4])
def test_roundtrip_shape_and_constants(factor: int) -> None:
    x = np.full((16, 16), 0.37)
    y = upsample_array(downsample_array(x, factor), factor)
    assert y.shape == x.shape
    assert np.array_equal(y, x)


def test_factor_one_is_identity() -> None:
    x = np.random.default_rng(0).standard_normal((8, 8))
    assert np.array_equal(downsample_array(x, 1), x)
    assert np.array_equal(upsample_array(x, 1), x)


@pytest.mark.parametrize("factor", [2, 4])
def test_transposes_are_adjoints(factor: int) -> None:
    rng = np.random.default_rng(factor)
    fine = rng.standard_normal((16, 16))
    coarse = rng.standard_normal((16 // factor, 16 // factor))
    lhs = np.vdot(downsample_array(fine, factor), coarse)
    assert lhs == pytest.approx(np.vdot(fine, downsample_adjoint_array(coarse, factor)), rel=1e-12)
    lhs = np.vdot(upsample_array(coarse, factor), fine)
    assert lhs == pytest.approx(np.vdot(coarse, upsample_adjoint_array(fine, factor)), rel=1e-12)


def test_dtype_preserved() -> None:
    x = np.ones((8, 8), dtype=np.float32)
    assert downsample_array(x, 2).dtype == np.float32
    assert upsample_array(x, 2).dtype == np.float32
