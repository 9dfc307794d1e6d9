import os

import pytest

from skunroll.common.configuration import ConfigIntegrityException
from skunroll.common.configuration.utils import dump_configuration_file, load_configuration_file, make_configuration
from skunroll.common.file_storage import FileStorage
from skunroll.harness import SECTIONS, ProductionRunConfiguration, RunConfiguration
from skunroll.harness.configuration import benchmark_variants, geometry, noise_spec, pdhg_config, regularizer, unroll_config

from tests.utils import TEST_STORAGE, autouse_root_storage  # noqa: F401


def _make(**values) -> type:  # type: ignore[no-untyped-def]
    return make_configuration(RunConfiguration, ProductionRunConfiguration, initial_values=values)


def test_defaults_pass_integrity() -> None:
    C = _make()
    assert C.NAME.startswith("skunroll_")
    g = geometry(C)
    assert g.sinogram_shape == (60, 96)
    assert g.full_grid_side == 64
    assert benchmark_variants(C) == ("lpd", "lspd", "sklpd1", "sklspd1")
    assert noise_spec(C, 3).seed == 3
    assert regularizer(C).kind == "tv"


@pytest.mark.parametrize("key,value", [
    ("UNROLL_VARIANT", "lpd3"), ("GEOMETRY_KIND", "cone"), ("SOLVER_KIND", "admm"), ("BENCHMARK_VARIANTS", "lpd,foo"),
    ("DATA_TRAIN_COUNT", -1), ("NOISE_I0", 0.0), ("SOLVER_REGULARIZER", "tgv")
])
def test_integrity_errors(key: str, value: object) -> None:
    with pytest.raises(ConfigIntegrityException) as py_ex:
        _make(**{key: value})
    assert py_ex.value.attr_name == key


def test_derived_configs() -> None:
    C = _make(UNROLL_VARIANT="sklspd2", UNROLL_NUM_LAYERS=6, UNROLL_SKETCH_SCHEDULE="4,4,2,2,1,1", RUN_SEED=9)
    cfg = unroll_config(C)
    assert cfg.variant == "sklspd2"
    assert cfg.sketch_schedule == (4, 4, 2, 2, 1, 1)
    assert cfg.seed == 9
    assert unroll_config(C, "lpd").variant == "lpd"
    # a single subset unless the stochastic solver is selected
    assert pdhg_config(C).num_subsets == 1
    assert pdhg_config(_make(SOLVER_KIND="spdhg", SOLVER_NUM_SUBSETS=5)).num_subsets == 5


def test_config_file_round_trip() -> None:
    storage = FileStorage(TEST_STORAGE, makedirs=True)
    storage.save("run.yaml", "geometry.num_angles: 30\nunroll.variant: sklpd1\nnoise.enabled: false\nrun.seed: 4\n")
    values = load_configuration_file(os.path.join(TEST_STORAGE, "run.yaml"), RunConfiguration)
    C = _make(**values)
    assert C.GEOMETRY_NUM_ANGLES == 30
    assert C.UNROLL_VARIANT == "sklpd1"
    assert C.NOISE_ENABLED is False
    # the snapshot of a resolved config loads back into the same values
    storage.save("snapshot.yaml", dump_configuration_file(C, SECTIONS))
    again = _make(**load_configuration_file(os.path.join(TEST_STORAGE, "snapshot.yaml"), RunConfiguration))
    for key in ("GEOMETRY_NUM_ANGLES", "UNROLL_VARIANT", "NOISE_ENABLED", "RUN_SEED", "SOLVER_SIGMA", "TRAIN_LR"):
        assert getattr(again, key) == getattr(C, key)
