import ast
from os import environ
from os.path import isfile
from typing import Any, Dict, List, Mapping, Sequence, Type, TypeVar, cast

import yaml

from skunroll.common.typing import DictStrAny, StrAny, is_optional_type, is_literal_type
from skunroll.common.configuration.basic_configuration import BasicConfiguration
from skunroll.common.configuration.exceptions import (ConfigEntryMissingException, ConfigEnvValueCannotBeCoercedException,
                                                      ConfigFileFormatException, ConfigFileNotFoundException)
from skunroll.common.utils import uniq_id
from skunroll._version import common_version

SIMPLE_TYPES: List[Any] = [int, bool, list, dict, tuple, bytes, set, float]
# strings and untyped values are taken as they come, without literal evaluation
NON_EVAL_TYPES = [str, None, Any]
# (target type, source type) pairs converted implicitly, so `1e5` from a file fits an int free float key
ALLOWED_TYPE_COERCIONS = [(float, int), (str, int), (str, float), (float, str)]
IS_DEVELOPMENT_CONFIG_KEY: str = "IS_DEVELOPMENT_CONFIG"
CHECK_INTEGRITY_F: str = "check_integrity"

TConfiguration = TypeVar("TConfiguration", bound=Type[BasicConfiguration])
TProductionConfiguration = TypeVar("TProductionConfiguration", bound=Type[BasicConfiguration])


def make_configuration(config: TConfiguration,
                       production_config: TProductionConfiguration,
                       initial_values: StrAny = None,
                       accept_partial: bool = False,
                       skip_subclass_check: bool = False) -> TConfiguration:
    """Resolves `config` (or `production_config` when IS_DEVELOPMENT_CONFIG is false) into a fresh derived class.

    Values are applied in order: class defaults, `initial_values` (typically from a config file) and environment
    variables with the same UPPERCASE names. Then all non Optional keys must be bound and every `check_integrity`
    along the MRO must pass.
    """
    if not skip_subclass_check:
        assert issubclass(production_config, config)

    base_config: TConfiguration = config if _is_development_config() else production_config
    hints = _get_config_attrs_with_hints(base_config)
    # a derived class so resolving never writes to the declared configuration
    derived_config = cast(TConfiguration, type(f"{base_config.__name__}_{uniq_id()}", (base_config, ), {}))
    if initial_values:
        _apply_values(derived_config, hints, {k.upper(): v for k, v in initial_values.items()}, coerce_all=False)
    _apply_values(derived_config, hints, environ, coerce_all=True)
    try:
        _is_config_bounded(derived_config, hints)
        _check_configuration_integrity(derived_config)
    except ConfigEntryMissingException:
        if not accept_partial:
            raise
    setattr(derived_config, "_VERSION", common_version)  # noqa: B010

    return derived_config


def load_configuration_file(path: str, config: TConfiguration) -> DictStrAny:
    """Reads a flat `section.key: value` file into UPPERCASE initial values of `config`"""
    if not isfile(path):
        raise ConfigFileNotFoundException(path)
    with open(path, "r", encoding="utf-8") as f:
        entries = yaml.safe_load(f) or {}
    if not isinstance(entries, dict):
        raise ConfigFileFormatException(path, "<root>", "expected a flat mapping of section.key: value")
    possible_keys = _get_config_attrs_with_hints(config)
    initial_values: DictStrAny = {}
    for key, value in entries.items():
        if isinstance(value, (dict, list)):
            raise ConfigFileFormatException(path, str(key), "nested values are not allowed")
        attr = str(key).replace(".", "_").upper()
        if attr not in possible_keys:
            raise ConfigFileFormatException(path, str(key), "unknown key")
        initial_values[attr] = value
    return initial_values


def config_as_file_entries(config: TConfiguration, sections: Sequence[str]) -> DictStrAny:
    """Renders config attributes back into `section.key` entries, the inverse of `load_configuration_file`"""
    entries: DictStrAny = {}
    for attr, value in config_as_dict(config, lowercase=True).items():
        if attr.startswith("_"):
            continue
        key = attr
        for section in sections:
            if attr.startswith(section + "_"):
                key = section + "." + attr[len(section) + 1:]
                break
        if isinstance(value, tuple):
            value = list(value)
        entries[key] = value
    return dict(sorted(entries.items()))


def dump_configuration_file(config: TConfiguration, sections: Sequence[str]) -> str:
    return yaml.safe_dump(config_as_file_entries(config, sections), default_flow_style=None, sort_keys=True)


def _is_development_config() -> bool:
    if IS_DEVELOPMENT_CONFIG_KEY not in environ:
        return True
    return bool(_coerce_single_value(IS_DEVELOPMENT_CONFIG_KEY, environ[IS_DEVELOPMENT_CONFIG_KEY], bool))


def _apply_values(config: TConfiguration, hints: Mapping[str, type], values: Mapping[str, Any], coerce_all: bool) -> None:
    # only declared keys are taken, the environment holds plenty of others
    for key, hint in hints.items():
        if key not in values:
            continue
        value = values[key]
        if coerce_all or isinstance(value, str) or (hint in SIMPLE_TYPES and value is not None and type(value) != hint):
            value = _coerce_single_value(key, value, hint)
        setattr(config, key, value)


def _is_config_bounded(config: TConfiguration, keys_in_config: Mapping[str, type]) -> None:
    unbound = [key for key, hint in keys_in_config.items() if getattr(config, key) is None and not is_optional_type(hint)]
    if unbound:
        raise ConfigEntryMissingException(unbound)


def _check_configuration_integrity(config: TConfiguration) -> None:
    # mixed configurations cannot call super() cooperatively, so call every check_integrity declared along the mro
    # with the resolved class so each one sees the final values
    for c in type.mro(config):
        check = c.__dict__.get(CHECK_INTEGRITY_F)
        if isinstance(check, classmethod):
            check.__func__(config)


def _coerce_single_value(key: str, value: Any, hint: Type[Any]) -> Any:
    target = _extract_simple_type(hint)
    if target in NON_EVAL_TYPES:
        if target is str and value is not None and not isinstance(value, str):
            return str(value)
        return value
    try:
        typed_value = ast.literal_eval(value) if isinstance(value, str) else value
    except (ValueError, SyntaxError) as exc:
        raise ConfigEnvValueCannotBeCoercedException(key, value, hint) from exc
    if target not in SIMPLE_TYPES or type(typed_value) == target:
        return typed_value
    if (target, type(typed_value)) in ALLOWED_TYPE_COERCIONS:
        return target(typed_value)
    raise ConfigEnvValueCannotBeCoercedException(key, typed_value, hint)


def _get_config_attrs_with_hints(config: TConfiguration) -> Dict[str, type]:
    keys: Dict[str, type] = {}
    # base classes first so derived classes overwrite their hints
    for cls in reversed(type.mro(config)):
        if cls is object:
            continue
        for attr in cls.__dict__:
            if not attr.startswith("_") and not callable(getattr(cls, attr)):
                keys[attr] = cls.__annotations__.get(attr, None)
    return keys


def _extract_simple_type(hint: Type[Any]) -> Type[Any]:
    if is_literal_type(hint):
        # literals of one key share a type
        return _extract_simple_type(type(hint.__args__[0]))
    if is_optional_type(hint):
        return _extract_simple_type(hint.__args__[0])
    if hasattr(hint, "__supertype__"):
        return _extract_simple_type(hint.__supertype__)
    return hint


def config_as_dict(config: TConfiguration, lowercase: bool = True) -> StrAny:
    values = {k: getattr(config, k) for k in dir(config) if not k.startswith("__") and not callable(getattr(config, k))}
    return {k.lower(): v for k, v in values.items()} if lowercase else values
