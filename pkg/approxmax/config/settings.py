"""
Centralized configuration management.

This module is the single source of truth for runtime settings read from
the environment (optionally through a `.env` file).
"""
from dataclasses import dataclass
from pathlib import Path
from dotenv import load_dotenv, find_dotenv
import logging
import os

from ..utils.exceptions import ConfigurationError

MIN_MP_PREC = 64


def _load_env() -> None:
    env_path = find_dotenv(usecwd=True)
    if env_path:
        load_dotenv(dotenv_path=env_path)
    else:
        # Fallback: project root
        env_path = Path(__file__).parent.parent.parent / '.env'
        if env_path.exists():
            load_dotenv(dotenv_path=env_path)


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class RuntimeSettings:
    """
    Runtime configuration.

    Controls trial parallelism, log verbosity and the working precision of
    the high-precision golden references.
    """
    max_workers: int = 1
    log_level: str = "INFO"
    mp_prec: int = 128

    def __post_init__(self):
        if self.max_workers < 1:
            raise ConfigurationError(f"max_workers must be >= 1, got {self.max_workers}")
        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            raise ConfigurationError(f"unknown log level {self.log_level!r}")
        if self.mp_prec < MIN_MP_PREC:
            raise ConfigurationError(f"mp_prec must be >= {MIN_MP_PREC}, got {self.mp_prec}")

    @classmethod
    def from_env(cls) -> 'RuntimeSettings':
        """
        Load runtime settings from environment variables.

        Looks for:
        - APPROXMAX_THREADS (trial worker threads)
        - APPROXMAX_LOG_LEVEL (DEBUG, INFO, ...)
        - APPROXMAX_MP_PREC (mpmath precision in bits)

        Returns:
            RuntimeSettings instance with loaded values
        """
        _load_env()
        return cls(
            max_workers=_int_env("APPROXMAX_THREADS", 1, 1),
            log_level=os.getenv("APPROXMAX_LOG_LEVEL", "INFO").upper(),
            mp_prec=_int_env("APPROXMAX_MP_PREC", 128, MIN_MP_PREC),
        )
