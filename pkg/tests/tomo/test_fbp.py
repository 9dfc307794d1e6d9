import numpy as np
import pytest

from skunroll.imaging import Sinogram, psnr
from skunroll.harness.phantoms import PhantomSpec, generate_phantom
from skunroll.tomo import Geometry, build_operator, fbp_reconstruct
from skunroll.tomo.exceptions import GridMismatchException, OperatorParameterException
from skunroll.tomo.fbp import ramp_response

from tests.utils import random_sinogram, small_fan_geometry, small_parallel_geometry


def test_ramp_response() -> None:
    response = ramp_response(32)
    assert response.shape == (64,)
    assert abs(response[0]) < 1e-2
    # symmetric with the peak at nyquist
    assert np.allclose(response[1:], response[1:][::-1])
    assert int(np.argmax(response)) == 32
    hann = ramp_response(32, "hann")
    assert np.all(hann <= response + 1e-15)
    with pytest.raises(OperatorParameterException):
        ramp_response(32, "shepp")  # type: ignore[arg-type]


def test_parallel_disk_reconstruction() -> None:
    geom = Geometry("parallel", 90, 96, 1.0, 64)
    truth = generate_phantom(PhantomSpec("disk", 64))
    sino = Sinogram(build_operator(geom, 64).apply(truth.values))
    recon = fbp_reconstruct(geom, sino, 64)
    assert psnr(recon, truth) >= 25.0


def test_fan_blob_reconstruction() -> None:
    geom = small_fan_geometry(32, 64, 96)
    truth = generate_phantom(PhantomSpec("gaussian_blob", 32))
    sino = Sinogram(build_operator(geom, 32).apply(truth.values))
    recon = fbp_reconstruct(geom, sino, 32).values
    assert np.corrcoef(recon.ravel(), truth.values.ravel())[0, 1] > 0.95


@pytest.mark.parametrize("geom", [small_parallel_geometry(16, 12), small_fan_geometry(16, 12)], ids=["parallel", "fan"])
def test_linear_before_clipping(geom: Geometry) -> None:
    s1 = random_sinogram(geom.sinogram_shape, 1)
    s2 = random_sinogram(geom.sinogram_shape, 2)
    both = fbp_reconstruct(geom, Sinogram(s1.values + s2.values), 16, clip=False).values
    separate = fbp_reconstruct(geom, s1, 16, clip=False).values + fbp_reconstruct(geom, s2, 16, clip=False).values
    assert np.allclose(both, separate, rtol=0.0, atol=1e-6)


def test_clipped_output_and_dtype() -> None:
    geom = small_parallel_geometry(16, 12)
    sino = Sinogram(random_sinogram(geom.sinogram_shape).values.astype(np.float32))
    recon = fbp_reconstruct(geom, sino, 8, filter="hann")
    assert recon.side == 8
    assert recon.values.dtype == np.float32
    assert recon.values.min() >= 0.0


def test_sinogram_must_match_geometry() -> None:
    geom = small_parallel_geometry(16, 12)
    with pytest.raises(GridMismatchException):
        fbp_reconstruct(geom, Sinogram(np.zeros((11, geom.num_detectors))), 16)
