"""Command-line interface."""
from .main import build_parser, main, normalize_argv

__all__ = ['build_parser', 'main', 'normalize_argv']
