import logging
from logging import LogRecord, Logger
from typing import Any, Callable, Dict, Type

import json_logging
import sentry_sdk
from sentry_sdk.transport import HttpTransport

from skunroll.common.json import json
from skunroll.common.typing import DictStrAny, StrStr
from skunroll.common.configuration import BasicConfiguration
from skunroll.common.utils import filter_env_vars
from skunroll._version import common_version as __version__

SKUNROLL_LOGGER_NAME = "skunroll"
# levels between INFO and WARNING so runs at INFO still show health and metrics lines
EXTRA_LEVELS: Dict[str, int] = {"HEALTH": logging.WARNING - 1, "METRICS": logging.WARNING - 2}
BUILD_ENV_VARS = ["COMMIT_SHA", "IMAGE_VERSION"]

LOGGER: Logger = None


def _register_level(level_name: str, level: int) -> None:
    method_name = level_name.lower()
    logger_class = logging.getLoggerClass()
    for owner in (logging, logger_class):
        if hasattr(owner, method_name):
            raise AttributeError(f"{method_name} already defined in {owner}")

    def _log_at_level(self: Logger, message: str, *args: Any, **kwargs: Any) -> None:
        if self.isEnabledFor(level):
            self._log(level, message, args, **kwargs)

    def _log_at_root(message: str, *args: Any, **kwargs: Any) -> None:
        logging.root._log(level, message, args, **kwargs)

    logging.addLevelName(level, level_name)
    setattr(logging, level_name, level)
    setattr(logger_class, method_name, _log_at_level)
    setattr(logging, method_name, _log_at_root)


class _MetricsFormatter(logging.Formatter):
    """Text lines with the `metrics` extra appended as sorted JSON"""

    def format(self, record: LogRecord) -> str:  # noqa: A003
        line = super().format(record)
        metrics = record.__dict__.get("metrics")
        if metrics is None:
            return line
        # keep the metrics after the traceback on their own line
        separator = "\n" if record.exc_text else ": "
        return line + separator + json.dumps(metrics, sort_keys=True)


class _RunJsonFormatter(json_logging.JSONLogFormatter):
    # json_logging builds the formatter itself so the run info cannot go through the constructor
    run_info: StrStr = None

    def _format_log_object(self, record: LogRecord, request_util: Any) -> Any:
        log_object = super()._format_log_object(record, request_util)
        if self.run_info:
            log_object["run"] = self.run_info
        return log_object


def _make_handler(fmt: str, run_info: StrStr) -> logging.Handler:
    handler = logging.StreamHandler()
    if not is_json_logging(fmt):
        handler.setFormatter(_MetricsFormatter(fmt=fmt, style="{"))
        return handler
    json_logging.COMPONENT_NAME = run_info["run_name"]
    json_logging.JSON_SERIALIZER = json.dumps
    if "process" in json_logging.RECORD_ATTR_SKIP_LIST:
        json_logging.RECORD_ATTR_SKIP_LIST.remove("process")
    _RunJsonFormatter.run_info = run_info
    json_logging.init_non_web(enable_json=True, custom_formatter=_RunJsonFormatter)
    handler.setFormatter(_RunJsonFormatter())
    return handler


def __getattr__(name: str) -> Callable[..., Any]:
    # logger.info(...), logger.metrics(...) etc. go to LOGGER and are dropped before init
    def _forward(msg: str, *args: Any, **kwargs: Any) -> None:
        if LOGGER:
            getattr(LOGGER, name)(msg, *args, **kwargs, stacklevel=2)
    return _forward


def _extract_run_info(config: Type[BasicConfiguration]) -> StrStr:
    run_info = {"version": __version__, "run_name": config.NAME}
    config_version = getattr(config, "_VERSION", None)
    if config_version:
        run_info["config_version"] = config_version
    run_info.update(filter_env_vars(BUILD_ENV_VARS))
    return run_info


class _SentryHttpTransport(HttpTransport):

    timeout: int = 0

    def _get_pool_options(self, *a: Any, **kw: Any) -> DictStrAny:
        options = super()._get_pool_options(*a, **kw)
        options["timeout"] = self.timeout
        return options


def _init_sentry(config: Type[BasicConfiguration], run_info: StrStr) -> None:
    if not config.SENTRY_DSN:
        return
    _SentryHttpTransport.timeout = config.SENTRY_TIMEOUT
    release = f"{run_info['version']}_{run_info.get('commit_sha', '')}"
    sentry_sdk.init(config.SENTRY_DSN, release=release, transport=_SentryHttpTransport)
    for tag, value in run_info.items():
        sentry_sdk.set_tag(tag, value)


def init_telemetry(config: Type[BasicConfiguration]) -> None:
    """Exposes the default prometheus registry on `PROMETHEUS_PORT`, trainers keep their own registries"""
    if config.PROMETHEUS_PORT:
        from prometheus_client import Info, start_http_server

        logging.info(f"Starting prometheus server port {config.PROMETHEUS_PORT}")
        start_http_server(config.PROMETHEUS_PORT)
        Info("skunroll_run", "Version and name of the running skunroll process").info(_extract_run_info(config))


def init_logging_from_config(C: Type[BasicConfiguration]) -> None:
    global LOGGER

    if not hasattr(logging, "health"):
        for level_name, level in EXTRA_LEVELS.items():
            _register_level(level_name, level)

    run_info = _extract_run_info(C)
    LOGGER = logging.getLogger(SKUNROLL_LOGGER_NAME)
    LOGGER.propagate = False
    LOGGER.setLevel(C.LOG_LEVEL)
    # re-init replaces the handler instead of stacking another one
    for handler in list(LOGGER.handlers):
        LOGGER.removeHandler(handler)
    LOGGER.addHandler(_make_handler(C.LOG_FORMAT, run_info))
    _init_sentry(C, run_info)


def is_json_logging(log_format: str) -> bool:
    return log_format == "JSON"


def process_internal_exception(msg: str, exc_info: Any = True) -> None:
    # exc_info=True takes the exception from sys.exc_info
    if LOGGER:
        LOGGER.error(msg, exc_info=exc_info, stacklevel=2)
    if sentry_sdk.Hub.current:
        sentry_sdk.capture_exception()
