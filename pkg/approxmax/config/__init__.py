"""Configuration module for approxmax."""
from .settings import RuntimeSettings
from .paths import PathManager

__all__ = ['RuntimeSettings', 'PathManager']
