import math

import numpy as np
import pytest

from skunroll.tomo import Geometry, fan_beam_geometry
from skunroll.tomo.exceptions import GeometryException


def test_default_angle_ranges() -> None:
    assert Geometry().angle_range == math.pi
    fan = fan_beam_geometry(16, 10, 32)
    assert fan.angle_range == 2.0 * math.pi
    assert fan.sinogram_shape == (10, 32)
    assert np.allclose(fan.angles(), np.arange(10) * (2.0 * math.pi / 10))


def test_detector_positions_centered() -> None:
    geom = Geometry(num_detectors=4, detector_spacing=0.5)
    assert np.array_equal(geom.detector_positions(), [-0.75, -0.25, 0.25, 0.75])


@pytest.mark.parametrize("field,kwargs", [
    ("kind", {"kind": "cone"}),
    ("num_angles", {"num_angles": 0}),
    ("num_detectors", {"num_detectors": 0}),
    ("detector_spacing", {"detector_spacing": 0.0}),
    ("full_grid_side", {"full_grid_side": 1}),
    ("angle_range", {"angle_range": -1.0}),
    ("source_radius", {"kind": "fan"}),
    ("source_radius", {"kind": "fan", "source_radius": 10.0, "detector_radius": 100.0, "full_grid_side": 64}),
])
def test_invalid_geometry(field: str, kwargs: dict) -> None:  # type: ignore[type-arg]
    with pytest.raises(GeometryException) as py_ex:
        Geometry(**kwargs)
    assert py_ex.value.field == field


def test_rays_are_unit_and_angle_major() -> None:
    for geom in (Geometry("parallel", 6, 10, 1.0, 8), fan_beam_geometry(8, 6, 10)):
        origins, directions = geom.rays()
        assert origins.shape == directions.shape == (60, 2)
        assert np.allclose(np.hypot(directions[:, 0], directions[:, 1]), 1.0)
    origins, directions = Geometry("parallel", 2, 4, 1.0, 8).rays()
    # angle 0 sends vertical rays through the detector positions along x
    assert np.allclose(origins[:4, 0], [-1.5, -0.5, 0.5, 1.5])
    assert np.allclose(directions[:4], [[0.0, 1.0]] * 4)


def test_dict_roundtrip_and_equality() -> None:
    geom = fan_beam_geometry(32, 20, 64)
    assert Geometry.from_dict(geom.as_dict()) == geom
    assert Geometry.from_dict({**geom.as_dict(), "num_angles": 21}) != geom
