from typing import Optional

import randomname

from skunroll.common.configuration.exceptions import ConfigIntegrityException

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class BasicConfiguration:
    """Keys shared by every skunroll process: its name, logging and the optional Sentry and Prometheus hookups"""

    NAME: Optional[str] = None  # name of the run, random when not given
    SENTRY_DSN: Optional[str] = None  # keep None to disable Sentry
    SENTRY_TIMEOUT: int = 15  # seconds the sentry transport waits for delivery
    PROMETHEUS_PORT: Optional[int] = None  # keep None to disable Prometheus
    LOG_FORMAT: str = '{asctime}|[{levelname:<21}]|{process}|{name}|{filename}|{funcName}:{lineno}|{message}'
    LOG_LEVEL: str = "INFO"
    IS_DEVELOPMENT_CONFIG: bool = True

    @classmethod
    def check_integrity(cls) -> None:
        if not cls.NAME:
            cls.NAME = "skunroll_" + randomname.get_name().replace("-", "_")
        if cls.LOG_LEVEL.upper() not in LOG_LEVELS:
            raise ConfigIntegrityException("LOG_LEVEL", cls.LOG_LEVEL, f"expected one of {', '.join(LOG_LEVELS)}")
        cls.LOG_LEVEL = cls.LOG_LEVEL.upper()
        if cls.PROMETHEUS_PORT is not None and not 0 < cls.PROMETHEUS_PORT < 65536:
            raise ConfigIntegrityException("PROMETHEUS_PORT", cls.PROMETHEUS_PORT, "expected a tcp port")
        if cls.SENTRY_TIMEOUT <= 0:
            raise ConfigIntegrityException("SENTRY_TIMEOUT", cls.SENTRY_TIMEOUT, "must be positive")
