"""
High-precision reference exponential.

e^x is computed with mpmath at a configurable precision and quantized once;
this is the golden value every approximate kernel is measured against.
"""
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from ..core.fixed_point import FixedFormat, FixedValue, quantize
from .base_kernel import BaseExpKernel
from .spec import ExpKernelSpec

DEFAULT_PREC = 128


@lru_cache(maxsize=1 << 17)
def _exact_exp_raw(raw: int, in_fmt: FixedFormat, out_fmt: FixedFormat, prec: int) -> int:
    with mpmath.workprec(prec):
        value = mpmath.exp(mpmath.ldexp(raw, -in_fmt.frac_bits))
        return quantize(value, out_fmt).raw


def eval_exact_exp(
    x: FixedValue,
    fmt: Optional[FixedFormat] = None,
    prec: int = DEFAULT_PREC,
) -> FixedValue:
    """
    Quantized high-precision e^x.

    Args:
        x: Operand
        fmt: Result format (defaults to the operand's format)
        prec: mpmath working precision in bits

    Returns:
        quantize(e^x) in ``fmt``; pinned at the format maximum when e^x
        does not fit
    """
    out = fmt or x.format
    return FixedValue(_exact_exp_raw(x.raw, x.format, out, prec), out)


class ExactKernel(BaseExpKernel):
    """Reference kernel; accepts the whole operand range."""

    def __init__(self, spec: ExpKernelSpec, prec: int = DEFAULT_PREC):
        super().__init__(spec)
        self.prec = prec

    def _domain_raw_bounds(self):
        return self.input_format.raw_min, self.input_format.raw_max

    def evaluate(self, x: FixedValue) -> FixedValue:
        self._check_operand(x)
        return eval_exact_exp(x, self.format, self.prec)

    def evaluate_real(self, xs: np.ndarray) -> np.ndarray:
        return np.exp(np.asarray(xs, dtype=np.float64))
