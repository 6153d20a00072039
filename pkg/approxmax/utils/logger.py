"""
Centralized logging utilities.

Provides consistent logging across the model, the harness and the CLI.
"""
import logging
from typing import Optional

LOG_FORMAT = '[%(name)s] %(levelname)s: %(message)s'


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a logger with consistent formatting.

    Args:
        name: Logger name (usually __name__)
        level: Log level name (defaults to INFO)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(getattr(logging, (level or "INFO").upper()))
        logger.propagate = False
    elif level:
        logger.setLevel(getattr(logging, level.upper()))

    return logger


def set_level(level: str) -> None:
    """Apply a level to every approxmax logger created so far."""
    resolved = getattr(logging, level.upper())
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith("approxmax") and isinstance(logger, logging.Logger):
            logger.setLevel(resolved)
