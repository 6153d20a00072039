"""
Custom exceptions for approxmax.

Every exception carries the process exit code the CLI reports for it:
0 ok, 2 configuration, 3 I/O, 4 numeric-degenerate.
"""
from typing import Optional


class ApproxMaxError(Exception):
    """Base exception for approxmax errors."""
    exit_code = 1


class ConfigurationError(ApproxMaxError):
    """Raised when a format, kernel spec or experiment config is invalid."""
    exit_code = 2


class FormatMismatchError(ConfigurationError, ValueError):
    """Raised when fixed-point operands do not share a format."""
    pass


class ShiftRangeError(ConfigurationError, ValueError):
    """Raised when a shift count is outside [0, total_bits)."""
    pass


class CoefficientRangeError(ConfigurationError):
    """Raised when LUT coefficients cannot be held by the working format."""

    def __init__(self, message: str, required_int_bits: int):
        super().__init__(message)
        self.required_int_bits = required_int_bits


class DomainError(ApproxMaxError, ValueError):
    """Raised for non-finite inputs or operands outside their domain."""
    exit_code = 2


class LengthMismatchError(ApproxMaxError, ValueError):
    """Raised when compared vectors or batches differ in length."""
    exit_code = 2


class ArtifactIOError(ApproxMaxError):
    """Raised when reading or writing an artifact fails."""
    exit_code = 3


class VectorParseError(ArtifactIOError):
    """Raised when a plain-text vector file cannot be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class NumericDegenerateError(ApproxMaxError):
    """Raised when a computation has no meaningful numeric result."""
    exit_code = 4


class DegenerateDenominatorError(NumericDegenerateError):
    """Raised when every exponential of a softmax quantizes to zero."""
    code = "DEGENERATE_DENOMINATOR"

    def __init__(self, kernel: str, fmt: str):
        super().__init__(
            f"{self.code}: all exponentials of kernel '{kernel}' quantize to 0 in {fmt}"
        )
        self.kernel = kernel
        self.format = fmt
