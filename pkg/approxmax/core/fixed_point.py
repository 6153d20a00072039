"""
Two's-complement fixed-point arithmetic.

Formats are spelled ``q<total>.<frac>`` (``q16.15`` holds [-1, 1 - 2^-15]).
Every operation rounds half away from zero and saturates to the format
range; nothing ever wraps. Values and formats are immutable, every
operation is a pure function.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Union
import math
import numbers
import re

import mpmath
import numpy as np

from ..utils.exceptions import (
    CoefficientRangeError,
    ConfigurationError,
    DomainError,
    FormatMismatchError,
    ShiftRangeError,
)

MIN_TOTAL_BITS = 2
MAX_TOTAL_BITS = 32

_FORMAT_RE = re.compile(r"^[qQ](\d+)\.(\d+)$")

Real = Union[int, float, Fraction, "mpmath.mpf", np.floating]


def round_shift(value: int, shift: int) -> int:
    """Divide an integer by 2**shift, rounding half away from zero.

    A negative shift multiplies instead (exact).
    """
    if shift <= 0:
        return value << -shift
    half = 1 << (shift - 1)
    if value >= 0:
        return (value + half) >> shift
    return -((half - value) >> shift)


def round_div(numerator: int, denominator: int) -> int:
    """Integer division rounded half away from zero (denominator > 0)."""
    quotient, remainder = divmod(abs(numerator), denominator)
    if 2 * remainder >= denominator:
        quotient += 1
    return quotient if numerator >= 0 else -quotient


def required_int_bits(magnitude: float) -> int:
    """Fewest integer bits (sign excluded) whose range reaches ``magnitude``."""
    bits = 0
    while 2 ** bits <= magnitude:
        bits += 1
    return bits


@dataclass(frozen=True)
class FixedFormat:
    """
    Signed two's-complement fixed-point format.

    ``total_bits`` includes the sign bit; ``frac_bits`` of them sit right of
    the binary point, so the quantization step is exactly 2^-frac_bits.
    """
    total_bits: int
    frac_bits: int

    def __post_init__(self):
        if not isinstance(self.total_bits, int) or not isinstance(self.frac_bits, int):
            raise ConfigurationError("format widths must be integers")
        if not MIN_TOTAL_BITS <= self.total_bits <= MAX_TOTAL_BITS:
            raise ConfigurationError(
                f"total_bits must be in [{MIN_TOTAL_BITS}, {MAX_TOTAL_BITS}], got {self.total_bits}"
            )
        if not 0 <= self.frac_bits <= self.total_bits - 1:
            raise ConfigurationError(
                f"frac_bits must be in [0, {self.total_bits - 1}], got {self.frac_bits}"
            )

    @classmethod
    def parse(cls, text: str) -> 'FixedFormat':
        """Parse ``q<total>.<frac>``."""
        match = _FORMAT_RE.match(text.strip())
        if not match:
            raise ConfigurationError(f"invalid fixed-point format {text!r}; expected q<total>.<frac>")
        return cls(int(match.group(1)), int(match.group(2)))

    def __str__(self) -> str:
        return f"q{self.total_bits}.{self.frac_bits}"

    @property
    def int_bits(self) -> int:
        return self.total_bits - 1 - self.frac_bits

    @property
    def scale(self) -> int:
        return 1 << self.frac_bits

    @property
    def raw_min(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def raw_max(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def step(self) -> float:
        return math.ldexp(1.0, -self.frac_bits)

    @property
    def min_value(self) -> float:
        return math.ldexp(self.raw_min, -self.frac_bits)

    @property
    def max_value(self) -> float:
        return math.ldexp(self.raw_max, -self.frac_bits)

    def raw_values(self) -> range:
        """Every raw value of the format, ascending."""
        return range(self.raw_min, self.raw_max + 1)

    def saturate(self, raw: int) -> int:
        if raw > self.raw_max:
            return self.raw_max
        if raw < self.raw_min:
            return self.raw_min
        return raw

    def is_saturated(self, v: 'FixedValue') -> bool:
        """True when ``v`` sits on either end of this format's range."""
        return v.format == self and v.raw in (self.raw_min, self.raw_max)

    def headroom_for(self, magnitude: float) -> 'FixedFormat':
        """
        Same width, fewest integer bits that still hold ``magnitude``.

        Raises:
            CoefficientRangeError: If no split of this width reaches it
        """
        for int_bits in range(self.total_bits):
            candidate = FixedFormat(self.total_bits, self.total_bits - 1 - int_bits)
            if magnitude <= candidate.max_value:
                return candidate
        needed = required_int_bits(magnitude)
        raise CoefficientRangeError(
            f"magnitude {magnitude:.6g} needs {needed} integer bits, "
            f"more than a {self.total_bits}-bit format holds",
            required_int_bits=needed,
        )


def parse_format(text: str) -> FixedFormat:
    """Parse a ``q<total>.<frac>`` format string."""
    return FixedFormat.parse(text)


@dataclass(frozen=True)
class FixedValue:
    """A raw two's-complement integer interpreted in a FixedFormat."""
    raw: int
    format: FixedFormat

    def __post_init__(self):
        if not self.format.raw_min <= self.raw <= self.format.raw_max:
            raise DomainError(f"raw {self.raw} outside {self.format}")

    @property
    def real(self) -> float:
        return dequantize(self)

    @property
    def at_max(self) -> bool:
        """True when the value is pinned at the format maximum."""
        return self.raw == self.format.raw_max

    def __float__(self) -> float:
        return dequantize(self)

    def __str__(self) -> str:
        return f"{dequantize(self)!r} ({self.format} raw {self.raw})"


def _to_fraction(x: Real) -> Fraction:
    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise DomainError(f"cannot quantize non-finite value {x}")
        mantissa, exponent = x.man_exp
        if exponent >= 0:
            return Fraction(int(mantissa) << exponent)
        return Fraction(int(mantissa), 1 << -exponent)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, numbers.Real):
        value = float(x)
        if not math.isfinite(value):
            raise DomainError(f"cannot quantize non-finite value {x}")
        return Fraction(value)
    raise DomainError(f"cannot quantize {type(x).__name__} value {x!r}")


def quantize(x: Real, fmt: FixedFormat) -> FixedValue:
    """
    Round a real number to the nearest raw value of ``fmt``.

    Ties round half away from zero; out-of-range values saturate.

    Raises:
        DomainError: If x is NaN or infinite
    """
    if isinstance(x, (float, np.floating)):
        value = float(x)
        if not math.isfinite(value):
            raise DomainError(f"cannot quantize non-finite value {x}")
        if abs(value) >= 2.0 ** (MAX_TOTAL_BITS + 1):
            return FixedValue(fmt.raw_max if value > 0 else fmt.raw_min, fmt)
        scaled = abs(math.ldexp(value, fmt.frac_bits))
        whole = math.floor(scaled)
        raw = int(whole) + (1 if scaled - whole >= 0.5 else 0)
        if value < 0:
            raw = -raw
        return FixedValue(fmt.saturate(raw), fmt)

    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise DomainError(f"cannot quantize non-finite value {x}")
        # beyond every format's reach: saturate or flush without big integers
        if abs(x) >= mpmath.ldexp(1, MAX_TOTAL_BITS + 1):
            return FixedValue(fmt.raw_max if x > 0 else fmt.raw_min, fmt)
        if abs(x) < mpmath.ldexp(1, -(MAX_TOTAL_BITS + 2)):
            return FixedValue(0, fmt)

    exact = _to_fraction(x) * fmt.scale
    raw = round_div(exact.numerator, exact.denominator)
    return FixedValue(fmt.saturate(raw), fmt)


def dequantize(v: FixedValue) -> float:
    """Exact real value raw * 2^-frac_bits."""
    return math.ldexp(v.raw, -v.format.frac_bits)


def _require_same_format(a: FixedValue, b: FixedValue) -> FixedFormat:
    if a.format != b.format:
        raise FormatMismatchError(f"operands in {a.format} and {b.format}")
    return a.format


def fx_add(a: FixedValue, b: FixedValue) -> FixedValue:
    """Saturating sum of two values of one format."""
    fmt = _require_same_format(a, b)
    return FixedValue(fmt.saturate(a.raw + b.raw), fmt)


def fx_mul_into(a: FixedValue, b: FixedValue, fmt: FixedFormat) -> FixedValue:
    """
    Full-width product of two values in any formats, rounded once into ``fmt``.
    """
    shift = a.format.frac_bits + b.format.frac_bits - fmt.frac_bits
    return FixedValue(fmt.saturate(round_shift(a.raw * b.raw, shift)), fmt)


def fx_mul(a: FixedValue, b: FixedValue) -> FixedValue:
    """Saturating product of two values of one format."""
    fmt = _require_same_format(a, b)
    return fx_mul_into(a, b, fmt)


def fx_shift_right(a: FixedValue, s: int) -> FixedValue:
    """
    Arithmetic right shift with round-half-away on the discarded bits.

    Raises:
        ShiftRangeError: If s is outside [0, total_bits)
    """
    if isinstance(s, bool) or not isinstance(s, int) or not 0 <= s < a.format.total_bits:
        raise ShiftRangeError(f"shift {s!r} outside [0, {a.format.total_bits}) for {a.format}")
    return FixedValue(a.format.saturate(round_shift(a.raw, s)), a.format)


def fx_convert(v: FixedValue, fmt: FixedFormat) -> FixedValue:
    """Re-align a value to another format (rounding, then saturating)."""
    if v.format == fmt:
        return v
    shift = v.format.frac_bits - fmt.frac_bits
    return FixedValue(fmt.saturate(round_shift(v.raw, shift)), fmt)
