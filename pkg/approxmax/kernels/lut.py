"""
Piecewise-polynomial exponential backed by precomputed lookup tables.

The domain [lo, hi) is cut into P uniform segments (P a power of two). At
build time each segment gets an interpolating polynomial of e^x: a line
through both segment endpoints, or a parabola through both endpoints and
the midpoint. At run time the segment is selected with one add and one
shift on the raw operand, and the polynomial is evaluated in fixed point.
Fitted coefficients are rounded to nearest in the working format; linear
tables can instead be anchored on the quantized node values.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple
import math

import mpmath
import numpy as np

from ..core.fixed_point import (
    FixedFormat,
    FixedValue,
    fx_add,
    fx_mul_into,
    quantize,
    required_int_bits,
    round_shift,
)
from ..utils.exceptions import CoefficientRangeError, ConfigurationError
from ..utils.logger import get_logger
from .base_kernel import BaseExpKernel
from .exact_kernel import DEFAULT_PREC
from .spec import ExpKernelSpec, KernelMethod, LutDegree, is_power_of_two

logger = get_logger(__name__)

COEFF_NAMES = {
    LutDegree.LINEAR: ("m", "b"),
    LutDegree.QUADRATIC: ("a", "b", "c"),
}


@dataclass(frozen=True)
class SegmentIndexMap:
    """
    Add-and-shift segment selection.

    ``index(raw) = (raw + bias) >> shift_amount``, clamped to [0, P-1].
    """
    bias: int
    shift_amount: int
    segments: int

    def raw_index(self, raw: int) -> int:
        return (raw + self.bias) >> self.shift_amount

    def locate(self, raw: int) -> Tuple[int, bool]:
        """Segment index and whether the operand lay outside the table."""
        idx = self.raw_index(raw)
        clamped = min(max(idx, 0), self.segments - 1)
        return clamped, clamped != idx

    def index(self, raw: int) -> int:
        return self.locate(raw)[0]

    def index_array(self, raws: np.ndarray) -> np.ndarray:
        idx = (np.asarray(raws, dtype=np.int64) + self.bias) >> self.shift_amount
        return np.clip(idx, 0, self.segments - 1)


def segment_index(x: FixedValue, index_map: SegmentIndexMap) -> int:
    """Segment holding x; out-of-domain operands land on the nearest end segment."""
    return index_map.index(x.raw)


def locate_segment(x: FixedValue, index_map: SegmentIndexMap) -> Tuple[int, bool]:
    """Like ``segment_index``, also reporting whether x was clamped onto an end segment."""
    return index_map.locate(x.raw)


@dataclass(frozen=True)
class LutTable:
    """
    Per-segment coefficients of a piecewise interpolant of e^x.

    Coefficients are ordered highest degree first: (m, b) for lines, (a, b, c)
    for parabolas. ``coeffs_real`` hold the high-precision interpolating
    coefficients rounded to float64; ``coeffs_raw`` hold the fixed-point
    coefficients in ``coeff_format`` used by the quantized kernel.
    """
    degree: LutDegree
    domain_lo: float
    domain_hi: float
    segments: int
    format: FixedFormat
    coeff_format: FixedFormat
    index_map: SegmentIndexMap
    coeffs_real: Tuple[Tuple[float, ...], ...]
    coeffs_raw: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.coeffs_real) != self.segments or len(self.coeffs_raw) != self.segments:
            raise ConfigurationError(
                f"table holds {len(self.coeffs_raw)} coefficient rows for {self.segments} segments"
            )

    @property
    def shift_amount(self) -> int:
        return self.index_map.shift_amount

    @property
    def bias(self) -> int:
        return self.index_map.bias

    @property
    def width(self) -> float:
        return (self.domain_hi - self.domain_lo) / self.segments

    @property
    def coeff_names(self) -> Tuple[str, ...]:
        return COEFF_NAMES[self.degree]

    def segment_bounds(self, p: int) -> Tuple[float, float]:
        return self.domain_lo + p * self.width, self.domain_lo + (p + 1) * self.width

    def nodes(self) -> List[float]:
        """Construction nodes: segment endpoints, plus midpoints for parabolas."""
        step = self.width / 2 if self.degree is LutDegree.QUADRATIC else self.width
        count = self.segments * (2 if self.degree is LutDegree.QUADRATIC else 1)
        return [self.domain_lo + i * step for i in range(count + 1)]

    def coefficients(self, p: int) -> Tuple[FixedValue, ...]:
        return tuple(FixedValue(raw, self.coeff_format) for raw in self.coeffs_raw[p])

    def eval_real(self, xs: np.ndarray) -> np.ndarray:
        """Real-coefficient evaluation in float64 (segments clamped at the ends)."""
        xs = np.asarray(xs, dtype=np.float64)
        idx = np.clip(np.floor((xs - self.domain_lo) / self.width), 0, self.segments - 1).astype(np.int64)
        coeffs = np.asarray(self.coeffs_real, dtype=np.float64)
        acc = coeffs[idx, 0]
        for column in range(1, coeffs.shape[1]):
            acc = acc * xs + coeffs[idx, column]
        return acc


def _index_map_for(lo_raw: int, hi_raw: int, segments: int, fmt: FixedFormat) -> SegmentIndexMap:
    span = hi_raw - lo_raw
    if segments > span:
        raise ConfigurationError(
            f"{segments} segments exceed the {span} raw values of the domain in {fmt}"
        )
    per_segment, remainder = divmod(span, segments)
    if remainder or not is_power_of_two(per_segment):
        raise ConfigurationError(
            f"domain spans {span} raw values in {fmt}; {segments} segments need a "
            f"power-of-two raw width per segment for shift indexing"
        )
    return SegmentIndexMap(bias=-lo_raw, shift_amount=per_segment.bit_length() - 1, segments=segments)


def _domain_raw(domain: Tuple[float, float], fmt: FixedFormat) -> Tuple[int, int]:
    bounds = []
    for bound in domain:
        if not math.isfinite(bound):
            raise ConfigurationError(f"lut domain bound {bound} is not finite")
        scaled = Fraction(bound) * fmt.scale
        if scaled.denominator != 1:
            raise ConfigurationError(f"lut domain bound {bound} is not a multiple of {fmt} step")
        bounds.append(int(scaled))
    lo_raw, hi_raw = bounds
    if lo_raw >= hi_raw:
        raise ConfigurationError(f"invalid lut domain [{domain[0]}, {domain[1]})")
    if lo_raw < fmt.raw_min or hi_raw - 1 > fmt.raw_max:
        raise ConfigurationError(f"lut domain [{domain[0]}, {domain[1]}) exceeds the range of {fmt}")
    return lo_raw, hi_raw


def _fit_segment(degree: LutDegree, x0, x1) -> Tuple:
    """High-precision interpolating coefficients of e^x on [x0, x1]."""
    if degree is LutDegree.LINEAR:
        slope = (mpmath.exp(x1) - mpmath.exp(x0)) / (x1 - x0)
        return slope, mpmath.exp(x0) - slope * x0
    points = [x0, (x0 + x1) / 2, x1]
    vandermonde = mpmath.matrix([[p ** 2, p, 1] for p in points])
    values = mpmath.matrix([mpmath.exp(p) for p in points])
    solution = mpmath.lu_solve(vandermonde, values)
    return tuple(solution[i] for i in range(3))


def _check_fits(values, coeff_format: FixedFormat, what: str) -> None:
    magnitude = max(abs(float(v)) for v in values)
    if magnitude > coeff_format.max_value:
        needed = required_int_bits(magnitude)
        raise CoefficientRangeError(
            f"{what} reach {magnitude:.6g}, beyond {coeff_format}; "
            f"{needed} integer bits required",
            required_int_bits=needed,
        )


def build_lut(
    spec: ExpKernelSpec,
    domain: Optional[Tuple[float, float]] = None,
    prec: int = DEFAULT_PREC,
    anchored: bool = False,
) -> LutTable:
    """
    Precompute a LUT for e^x.

    Args:
        spec: A ``lut`` kernel spec (degree, P, operand and working formats)
        domain: Covered interval [lo, hi); defaults to the kernel spec's domain
        prec: mpmath precision in bits for the coefficient fits
        anchored: Derive linear coefficients from the quantized node values
            instead of rounding each fitted coefficient to nearest. Adjacent
            segments then meet exactly and the kernel is non-decreasing in
            every format; quadratic tables ignore it.

    Returns:
        The built table

    Raises:
        ConfigurationError: If the kernel spec is not a LUT spec or the domain cannot
            be indexed with add-and-shift in the operand format
        CoefficientRangeError: If coefficients do not fit the working format
    """
    if spec.method is not KernelMethod.LUT:
        raise ConfigurationError(f"build_lut needs a lut kernel spec, got {spec.name}")
    lo, hi = domain or spec.domain
    fmt, work = spec.format, spec.working_format
    lo_raw, hi_raw = _domain_raw((lo, hi), fmt)
    index_map = _index_map_for(lo_raw, hi_raw, spec.segments, fmt)
    seg_raw = 1 << index_map.shift_amount
    f = fmt.frac_bits

    with mpmath.workprec(prec):
        nodes = [mpmath.ldexp(lo_raw + p * seg_raw, -f) for p in range(spec.segments + 1)]
        fits = [_fit_segment(spec.degree, nodes[p], nodes[p + 1]) for p in range(spec.segments)]
        _check_fits([c for fit in fits for c in fit], work, f"{spec.name} coefficients")

        if anchored and spec.degree is LutDegree.LINEAR:
            ys = [quantize(mpmath.exp(node), work).raw for node in nodes]
            coeffs_raw = []
            for p in range(spec.segments):
                m_raw = round_shift(ys[p + 1] - ys[p], index_map.shift_amount - f)
                x1_raw = lo_raw + (p + 1) * seg_raw
                b_raw = ys[p + 1] - round_shift(m_raw * x1_raw, f)
                coeffs_raw.append((m_raw, b_raw))
        else:
            coeffs_raw = [tuple(quantize(c, work).raw for c in fit) for fit in fits]
        coeffs_real = tuple(tuple(float(c) for c in fit) for fit in fits)

    overflow = [raw for row in coeffs_raw for raw in row if work.saturate(raw) != raw]
    if overflow:
        magnitude = max(abs(raw) for raw in overflow) * work.step
        needed = required_int_bits(magnitude)
        raise CoefficientRangeError(
            f"{spec.name} coefficients reach {magnitude:.6g}, beyond {work}; "
            f"{needed} integer bits required",
            required_int_bits=needed,
        )

    table = LutTable(
        degree=spec.degree,
        domain_lo=float(lo),
        domain_hi=float(hi),
        segments=spec.segments,
        format=fmt,
        coeff_format=work,
        index_map=index_map,
        coeffs_real=coeffs_real,
        coeffs_raw=tuple(tuple(row) for row in coeffs_raw),
    )
    logger.debug(
        "built %s over [%s, %s) in %s: shift %d, bias %d",
        spec.name, lo, hi, work, index_map.shift_amount, index_map.bias,
    )
    return table


def lut_lookup(x: FixedValue, table: LutTable) -> Tuple[FixedValue, bool]:
    """
    Evaluate the table at x in fixed point.

    Every multiply takes the operand at full width and rounds once into
    the coefficient format; sums saturate. Operands outside the table
    domain use the nearest end segment.

    Returns:
        The value and whether x was clamped onto an end segment
    """
    if x.format != table.format:
        raise ConfigurationError(f"table built for {table.format}, operand in {x.format}")
    p, clamped = locate_segment(x, table.index_map)
    coeffs = table.coefficients(p)
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = fx_add(fx_mul_into(acc, x, table.coeff_format), c)
    return acc, clamped


def eval_lut_exp(x: FixedValue, table: LutTable) -> FixedValue:
    """Evaluate the table at x in fixed point (see ``lut_lookup``)."""
    return lut_lookup(x, table)[0]


class LutKernel(BaseExpKernel):
    """LUT-interpolation kernel over [lo, hi)."""

    def __init__(self, spec: ExpKernelSpec, prec: int = DEFAULT_PREC, table: Optional[LutTable] = None,
                 anchored: bool = False):
        self.table = table or build_lut(spec, prec=prec, anchored=anchored)
        super().__init__(spec)

    def _domain_raw_bounds(self) -> Tuple[int, int]:
        lo_raw = -self.table.bias
        hi_raw = lo_raw + (self.table.segments << self.table.shift_amount) - 1
        return max(lo_raw, self.input_format.raw_min), min(hi_raw, self.input_format.raw_max)

    def evaluate(self, x: FixedValue) -> FixedValue:
        self._check_operand(x)
        return eval_lut_exp(x, self.table)

    def evaluate_real(self, xs: np.ndarray) -> np.ndarray:
        return self.table.eval_real(xs)
