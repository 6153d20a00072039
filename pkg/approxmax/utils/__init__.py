"""Utilities module for approxmax."""
from .logger import get_logger, set_level
from .exceptions import (
    ApproxMaxError,
    ConfigurationError,
    FormatMismatchError,
    ShiftRangeError,
    CoefficientRangeError,
    DomainError,
    LengthMismatchError,
    ArtifactIOError,
    VectorParseError,
    NumericDegenerateError,
    DegenerateDenominatorError,
)

__all__ = [
    'get_logger',
    'set_level',
    'ApproxMaxError',
    'ConfigurationError',
    'FormatMismatchError',
    'ShiftRangeError',
    'CoefficientRangeError',
    'DomainError',
    'LengthMismatchError',
    'ArtifactIOError',
    'VectorParseError',
    'NumericDegenerateError',
    'DegenerateDenominatorError',
]
