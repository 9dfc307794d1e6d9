from os import environ
from typing import Any, Dict, List, Optional, Tuple

import pytest

from skunroll.common.configuration import (
    BasicConfiguration, ConfigEntryMissingException, ConfigEnvValueCannotBeCoercedException, ConfigFileFormatException,
    ConfigFileNotFoundException, ConfigIntegrityException, utils)
from skunroll.common.configuration.utils import (_coerce_single_value, IS_DEVELOPMENT_CONFIG_KEY, _get_config_attrs_with_hints,
                                                 config_as_dict, config_as_file_entries, dump_configuration_file,
                                                 load_configuration_file, make_configuration)
from skunroll.common.file_storage import FileStorage
from skunroll import __version__

from tests.utils import TEST_STORAGE


COERCIONS = {
    'STR_VAL': 'test string',
    'INT_VAL': 12345,
    'BOOL_VAL': True,
    'LIST_VAL': [1, "2", [3]],
    'DICT_VAL': {
        'a': 1,
        "b": "2"
    },
    'TUPLE_VAL': (1, 2, '7'),
    'FLOAT_VAL': 1.18927,
    'COMPLEX_VAL': {
        "_": (1440, ["*"], []),
    }
}

INVALID_COERCIONS = {
    'INT_VAL': "a12345",
    'BOOL_VAL': "Yes",  # bool overridden by string - that is the most common problem
    'TUPLE_VAL': [1, 2, '7'],
    'FLOAT_VAL': "invalid"
}


class SimpleConfiguration(BasicConfiguration):
    NAME: str = "Some Name"


class WrongConfiguration(BasicConfiguration):
    NAME: str = "Some Name"
    NoneConfigVar = None


class CoercionConfiguration(BasicConfiguration):
    NAME: str = "Some Name"
    STR_VAL: str = None
    INT_VAL: int = None
    BOOL_VAL: bool = None
    LIST_VAL: list = None  # type: ignore
    DICT_VAL: dict = None  # type: ignore
    TUPLE_VAL: tuple = None  # type: ignore
    FLOAT_VAL: float = None
    COMPLEX_VAL: Dict[str, Tuple[int, List[str], List[str]]] = None


class SolverConfiguration(BasicConfiguration):
    NAME: str = "solver"
    SOLVER_ITERATIONS: int = 100
    SOLVER_STEP: Optional[float] = None
    SOLVER_KIND: str = "pdhg"
    GRID_SIDE: int = 64

    @classmethod
    def check_integrity(cls) -> None:
        if cls.SOLVER_ITERATIONS < 1:
            raise ConfigIntegrityException("SOLVER_ITERATIONS", cls.SOLVER_ITERATIONS, "at least one iteration")


class ProductionSolverConfiguration(SolverConfiguration):
    SOLVER_ITERATIONS: int = 1000
    LOG_LEVEL: str = "warning"


class SketchConfiguration(BasicConfiguration):
    SKETCH_FACTOR: int = 2

    @classmethod
    def check_integrity(cls) -> None:
        if cls.SKETCH_FACTOR < 1:
            raise ConfigIntegrityException("SKETCH_FACTOR", cls.SKETCH_FACTOR, ">= 1")


class MixedConfiguration(SolverConfiguration, SketchConfiguration):
    pass


@pytest.fixture(scope="module", autouse=True)
def preserve_environ() -> None:
    saved_environ = environ.copy()
    yield
    environ.clear()
    environ.update(saved_environ)


@pytest.fixture(scope="function")
def environment() -> Any:
    environ.clear()
    return environ


def test_basic_configuration_gen_name(environment: Any) -> None:
    C = make_configuration(BasicConfiguration, BasicConfiguration)
    assert C.NAME.startswith("skunroll_")


@pytest.mark.parametrize("key,value", [("LOG_LEVEL", "chatty"), ("PROMETHEUS_PORT", "0"), ("PROMETHEUS_PORT", "70000"), ("SENTRY_TIMEOUT", "-1")])
def test_basic_configuration_integrity(environment: Any, key: str, value: str) -> None:
    environment[key] = value
    with pytest.raises(ConfigIntegrityException) as py_ex:
        make_configuration(BasicConfiguration, BasicConfiguration)
    assert py_ex.value.attr_name == key


def test_configuration_rise_exception_when_config_is_not_complete() -> None:
    with pytest.raises(ConfigEntryMissingException) as config_entry_missing_exception:
        keys = _get_config_attrs_with_hints(WrongConfiguration)
        utils._is_config_bounded(WrongConfiguration, keys)
    assert 'NoneConfigVar' in config_entry_missing_exception.value.missing_set


def test_optional_types_are_not_required(environment: Any) -> None:
    C = make_configuration(SolverConfiguration, SolverConfiguration)
    assert C.SOLVER_STEP is None


def test_coercions(environment: Any) -> None:
    for key, value in COERCIONS.items():
        environment[key] = str(value)
    C = make_configuration(CoercionConfiguration, CoercionConfiguration)
    for key in COERCIONS:
        assert getattr(C, key) == COERCIONS[key]


def test_invalid_coercions(environment: Any) -> None:
    config_keys = _get_config_attrs_with_hints(CoercionConfiguration)
    for key, value in INVALID_COERCIONS.items():
        environment.clear()
        environment[key] = str(value)
        with pytest.raises(ConfigEnvValueCannotBeCoercedException) as coerc_exc:
            utils._apply_values(CoercionConfiguration, config_keys, environment, coerce_all=True)
        assert coerc_exc.value.attr_name == key


def test_excepted_coercions(environment: Any) -> None:
    # int is accepted for float and float for str
    environment["FLOAT_VAL"] = "10"
    environment["STR_VAL"] = "10.0"
    C = make_configuration(CoercionConfiguration, CoercionConfiguration, accept_partial=True)
    assert C.FLOAT_VAL == 10.0
    assert isinstance(C.FLOAT_VAL, float)
    assert C.STR_VAL == "10.0"


def test_development_config_detection(environment: Any) -> None:
    assert utils._is_development_config()
    environment[IS_DEVELOPMENT_CONFIG_KEY] = "False"
    assert not utils._is_development_config()
    environment[IS_DEVELOPMENT_CONFIG_KEY] = "True"
    assert utils._is_development_config()
    with pytest.raises(ConfigEnvValueCannotBeCoercedException):
        environment[IS_DEVELOPMENT_CONFIG_KEY] = "NONBOOL"
        utils._is_development_config()


def test_make_configuration_selects_production(environment: Any) -> None:
    C = make_configuration(SolverConfiguration, ProductionSolverConfiguration)
    assert C.__mro__[1] is SolverConfiguration
    assert C.SOLVER_ITERATIONS == 100
    environment[IS_DEVELOPMENT_CONFIG_KEY] = "False"
    C = make_configuration(SolverConfiguration, ProductionSolverConfiguration)
    assert C.__mro__[1] is ProductionSolverConfiguration
    assert C.SOLVER_ITERATIONS == 1000
    assert C.LOG_LEVEL == "WARNING"


def test_configuration_must_be_subclass_of_prod(environment: Any) -> None:
    with pytest.raises(AssertionError):
        make_configuration(SolverConfiguration, SketchConfiguration)


def test_auto_derivation(environment: Any) -> None:
    environment["SOLVER_ITERATIONS"] = "7"
    C = make_configuration(SolverConfiguration, SolverConfiguration)
    assert C.SOLVER_ITERATIONS == 7
    # base type is untouched
    assert SolverConfiguration.SOLVER_ITERATIONS == 100
    assert C.__name__.startswith("SolverConfiguration_")


def test_initial_values_are_overridden_from_env(environment: Any) -> None:
    environment["SOLVER_KIND"] = "spdhg"
    C = make_configuration(SolverConfiguration, SolverConfiguration,
                           {"solver_kind": "fbp", "SOLVER_ITERATIONS": "12", "UNKNOWN_VAL": 1, "SOLVER_STEP": 0.5})
    assert C.SOLVER_KIND == "spdhg"
    # strings are coerced to hints
    assert C.SOLVER_ITERATIONS == 12
    assert C.SOLVER_STEP == 0.5
    # undeclared values are skipped
    assert not hasattr(C, "UNKNOWN_VAL")


def test_integrity_checked_along_mro(environment: Any) -> None:
    C = make_configuration(MixedConfiguration, MixedConfiguration)
    assert C.SKETCH_FACTOR == 2
    with pytest.raises(ConfigIntegrityException) as py_ex:
        make_configuration(MixedConfiguration, MixedConfiguration, {"SKETCH_FACTOR": 0})
    assert py_ex.value.attr_name == "SKETCH_FACTOR"
    with pytest.raises(ConfigIntegrityException) as py_ex:
        make_configuration(MixedConfiguration, MixedConfiguration, {"SOLVER_ITERATIONS": 0})
    assert py_ex.value.attr_name == "SOLVER_ITERATIONS"


def test_stamps_package_version(environment: Any) -> None:
    C = make_configuration(SimpleConfiguration, SimpleConfiguration)
    assert C._VERSION == __version__


def test_coerce_values() -> None:
    with pytest.raises(ConfigEnvValueCannotBeCoercedException):
        _coerce_single_value("key", "some string", int)
    assert _coerce_single_value("key", "some string", str) == "some string"
    assert _coerce_single_value("key", "some string", Optional[str]) == "some string"  # type: ignore
    assert _coerce_single_value("key", "234", int) == 234
    assert _coerce_single_value("key", "234", Optional[int]) == 234  # type: ignore
    assert _coerce_single_value("key", "0.25", Optional[float]) == 0.25  # type: ignore


def test_load_configuration_file(environment: Any) -> None:
    storage = FileStorage(TEST_STORAGE, makedirs=True)
    storage.save("run.yaml", "solver.iterations: 20\nsolver.kind: spdhg\ngrid.side: 32\n")
    initial = load_configuration_file(storage.make_full_path("run.yaml"), SolverConfiguration)
    assert initial == {"SOLVER_ITERATIONS": 20, "SOLVER_KIND": "spdhg", "GRID_SIDE": 32}
    C = make_configuration(SolverConfiguration, SolverConfiguration, initial)
    assert C.SOLVER_ITERATIONS == 20


def test_load_configuration_file_errors(environment: Any) -> None:
    storage = FileStorage(TEST_STORAGE, makedirs=True)
    with pytest.raises(ConfigFileNotFoundException):
        load_configuration_file(storage.make_full_path("missing.yaml"), SolverConfiguration)
    storage.save("unknown.yaml", "solver.flavor: sweet\n")
    with pytest.raises(ConfigFileFormatException) as py_ex:
        load_configuration_file(storage.make_full_path("unknown.yaml"), SolverConfiguration)
    assert py_ex.value.key == "solver.flavor"
    storage.save("nested.yaml", "solver:\n  iterations: 3\n")
    with pytest.raises(ConfigFileFormatException):
        load_configuration_file(storage.make_full_path("nested.yaml"), SolverConfiguration)
    storage.save("list.yaml", "- solver.iterations\n")
    with pytest.raises(ConfigFileFormatException):
        load_configuration_file(storage.make_full_path("list.yaml"), SolverConfiguration)


def test_dump_configuration_file_loads_back(environment: Any) -> None:
    C = make_configuration(SolverConfiguration, SolverConfiguration, {"SOLVER_ITERATIONS": 33, "SOLVER_STEP": 0.1})
    entries = config_as_file_entries(C, ("solver", "grid"))
    assert entries["solver.iterations"] == 33
    assert entries["grid.side"] == 64
    assert "_version" not in entries
    storage = FileStorage(TEST_STORAGE, makedirs=True)
    storage.save("dump.yaml", dump_configuration_file(C, ("solver", "grid")))
    initial = load_configuration_file(storage.make_full_path("dump.yaml"), SolverConfiguration)
    C2 = make_configuration(SolverConfiguration, SolverConfiguration, initial)
    assert config_as_dict(C2)["solver_iterations"] == 33
    assert C2.SOLVER_STEP == 0.1
    assert C2.NAME == C.NAME
