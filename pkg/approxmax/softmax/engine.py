"""
Softmax pipelines.

``softmax_exact`` is the high-precision oracle. ``softmax_approx`` models the
accelerator dataflow bit for bit: clamp into the kernel domain, evaluate the
exponential kernel, accumulate raw exponentials in a wide accumulator, then
normalize each element with one integer division. ``softmax_approx_real``
runs the same kernel with real coefficients in float64 to measure the
approximation's method error alone.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import math

import mpmath
import numpy as np

from ..core.fixed_point import (
    FixedFormat,
    FixedValue,
    fx_convert,
    fx_shift_right,
    quantize,
    round_div,
)
from ..kernels.base_kernel import BaseExpKernel
from ..kernels.factory import create_kernel
from ..kernels.spec import ExpKernelSpec
from ..utils.exceptions import ConfigurationError, DegenerateDenominatorError, DomainError
from ..utils.logger import get_logger

logger = get_logger(__name__)

KernelLike = Union[BaseExpKernel, ExpKernelSpec, str]


@dataclass(frozen=True)
class LogitsVector:
    """Logits sharing one fixed-point format."""
    values: Tuple[FixedValue, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise DomainError("a logits vector needs at least one element")
        fmt = self.values[0].format
        if any(v.format != fmt for v in self.values):
            raise ConfigurationError("logits must share one fixed-point format")

    @classmethod
    def from_reals(cls, reals: Iterable[float], fmt: FixedFormat) -> 'LogitsVector':
        return cls(tuple(quantize(x, fmt) for x in reals))

    @classmethod
    def from_raws(cls, raws: Iterable[int], fmt: FixedFormat) -> 'LogitsVector':
        return cls(tuple(FixedValue(int(r), fmt) for r in raws))

    @property
    def format(self) -> FixedFormat:
        return self.values[0].format

    def reals(self) -> List[float]:
        return [v.real for v in self.values]

    def raws(self) -> List[int]:
        return [v.raw for v in self.values]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SoftmaxResult:
    """
    Output of the fixed-point pipeline.

    ``argmax`` is the lowest index holding the largest probability. Distinct
    exponentials can round to one probability, so it may differ from the
    position of the largest kernel output.
    """
    probs: Tuple[FixedValue, ...]
    sum_raw: int
    argmax: int
    clamp_count: int = 0
    saturation_count: int = 0
    kernel: str = ""

    @property
    def format(self) -> FixedFormat:
        return self.probs[0].format

    def reals(self) -> List[float]:
        return [p.real for p in self.probs]

    def raws(self) -> List[int]:
        return [p.raw for p in self.probs]


@dataclass(frozen=True)
class RealSoftmaxResult:
    """Output of the real-coefficient pipeline."""
    probs: np.ndarray = field(compare=False)
    argmax: int
    clamp_count: int = 0
    kernel: str = ""


@dataclass(frozen=True)
class StabilizerConfig:
    """Prescale by 1/2^shift_bits, realized as an arithmetic right shift."""
    shift_bits: int = 0

    def __post_init__(self):
        if isinstance(self.shift_bits, bool) or not isinstance(self.shift_bits, int) or self.shift_bits < 0:
            raise ConfigurationError(f"shift_bits must be a non-negative integer, got {self.shift_bits!r}")

    @classmethod
    def for_inputs(cls, n: int) -> 'StabilizerConfig':
        """Smallest shift whose scale 2^s is at least n."""
        if n < 1:
            raise ConfigurationError(f"input count must be >= 1, got {n}")
        return cls((n - 1).bit_length())

    @property
    def scale(self) -> int:
        return 1 << self.shift_bits


def _resolve_kernel(kernel: KernelLike, fmt: FixedFormat) -> BaseExpKernel:
    if isinstance(kernel, BaseExpKernel):
        return kernel
    return create_kernel(kernel, fmt)


def default_output_format(fmt: FixedFormat) -> FixedFormat:
    """Probabilities keep the logits' width with a single integer (sign) bit."""
    return FixedFormat(fmt.total_bits, fmt.total_bits - 1)


def softmax_exact(v: Sequence[float], prec: int = 128) -> List[float]:
    """
    Softmax in high-precision arithmetic.

    Args:
        v: Finite real inputs (k >= 1)
        prec: mpmath working precision in bits

    Returns:
        e^{v_i} / Σ_j e^{v_j}, rounded to float
    """
    if len(v) < 1:
        raise DomainError("softmax needs at least one input")
    with mpmath.workprec(prec):
        values = [mpmath.mpf(float(x)) if not isinstance(x, mpmath.mpf) else x for x in v]
        if not all(mpmath.isfinite(x) for x in values):
            raise DomainError("softmax inputs must be finite")
        exps = [mpmath.exp(x) for x in values]
        total = mpmath.fsum(exps)
        return [float(e / total) for e in exps]


def softmax_approx(
    v: LogitsVector,
    kernel: KernelLike,
    out_fmt: Optional[FixedFormat] = None,
) -> SoftmaxResult:
    """
    Fixed-point softmax.

    Args:
        v: Logits
        kernel: Kernel instance, spec, or spec text (built for v's format)
        out_fmt: Probability format; defaults to q<T, T-1> for T-bit logits

    Returns:
        SoftmaxResult with clamp and saturation counts

    Raises:
        DegenerateDenominatorError: If every exponential quantizes to 0
    """
    unit = _resolve_kernel(kernel, v.format)
    out = out_fmt or default_output_format(v.format)

    exps: List[int] = []
    clamps = saturations = 0
    for x in v.values:
        operand, clamped = unit.clamp(fx_convert(x, unit.input_format))
        clamps += clamped
        e = unit.evaluate(operand)
        saturations += e.at_max
        exps.append(max(e.raw, 0))

    total = sum(exps)
    if total == 0:
        raise DegenerateDenominatorError(unit.name, str(unit.format))

    probs = tuple(
        FixedValue(out.saturate(round_div(e << out.frac_bits, total)), out) for e in exps
    )
    raws = [p.raw for p in probs]
    argmax = raws.index(max(raws))
    if clamps or saturations:
        logger.debug("%s: %d clamps, %d saturations over %d logits", unit.name, clamps, saturations, len(v))
    return SoftmaxResult(
        probs=probs,
        sum_raw=total,
        argmax=argmax,
        clamp_count=clamps,
        saturation_count=saturations,
        kernel=unit.name,
    )


def softmax_approx_real(v: Union[LogitsVector, Sequence[float]], kernel: KernelLike,
                        fmt: Optional[FixedFormat] = None) -> RealSoftmaxResult:
    """
    Method-error softmax: the kernel polynomial with real coefficients in
    float64, normalized with an exactly rounded sum.

    Args:
        v: Logits (a LogitsVector, or reals together with ``fmt``)
        kernel: Kernel instance, spec, or spec text
        fmt: Operand format when ``v`` holds plain reals
    """
    if isinstance(v, LogitsVector):
        fmt = v.format
        xs = np.array(v.reals(), dtype=np.float64)
    else:
        if fmt is None and not isinstance(kernel, BaseExpKernel):
            raise ConfigurationError("real logits need an operand format to select the kernel")
        xs = np.asarray(v, dtype=np.float64)
    unit = _resolve_kernel(kernel, fmt) if fmt is not None else kernel

    clamped, clamps = unit.clamp_real(xs)
    exps = np.maximum(unit.evaluate_real(clamped), 0.0)
    total = math.fsum(exps.tolist())
    if not total > 0.0:
        raise DegenerateDenominatorError(unit.name, "float64")
    probs = exps / total
    return RealSoftmaxResult(
        probs=probs,
        argmax=int(np.argmax(probs)),
        clamp_count=clamps,
        kernel=unit.name,
    )


def prescale(x: LogitsVector, cfg: StabilizerConfig) -> LogitsVector:
    """
    Divide every logit by 2^shift_bits with a rounding right shift.

    Raises:
        ShiftRangeError: If the shift is not below the format width
    """
    if cfg.shift_bits == 0:
        return x
    return LogitsVector(tuple(fx_shift_right(v, cfg.shift_bits) for v in x.values))
