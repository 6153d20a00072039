"""
Truncated Maclaurin series of e^x (orders 1 to 3).

Two fixed-point schemes are modeled:

- power-sum: every term is formed at full product width and the sum is
  rounded once into the result format. The result is non-decreasing in
  the raw input for every format.
- horner: ((c3·x + c2)·x + 1)·x + 1 with a rounding after each stage,
  the literal multiply-add dataflow of a pipelined unit.

Power-sum is the default; append ``-horner`` to the kernel name
(``taylor3-horner``) to select the nested evaluation.
"""
from fractions import Fraction
from math import factorial
from typing import List, Optional

import numpy as np

from ..core.fixed_point import (
    FixedFormat,
    FixedValue,
    fx_add,
    fx_convert,
    fx_mul,
    quantize,
    round_shift,
)
from ..utils.logger import get_logger
from .base_kernel import BaseExpKernel
from .spec import MAX_TAYLOR_ORDER, ExpKernelSpec, TaylorScheme

logger = get_logger(__name__)


def taylor_constants(order: int, fmt: FixedFormat) -> List[FixedValue]:
    """Quantized series constants 1/n! for n = 0..order."""
    if not 1 <= order <= MAX_TAYLOR_ORDER:
        raise ValueError(f"taylor order must be in 1..{MAX_TAYLOR_ORDER}, got {order}")
    return [quantize(Fraction(1, factorial(n)), fmt) for n in range(order + 1)]


def real_taylor_coefficients(order: int) -> np.ndarray:
    """Real coefficients 1/n!, lowest degree first."""
    return np.array([1.0 / factorial(n) for n in range(order + 1)])


def _power_sum(x: FixedValue, consts: List[FixedValue], out: FixedFormat) -> FixedValue:
    order = len(consts) - 1
    f = x.format.frac_bits
    # sum in units of 2^-(out.frac_bits + order·f)
    acc = consts[0].raw << (order * f)
    acc += x.raw << (out.frac_bits + (order - 1) * f)
    for n in range(2, order + 1):
        acc += (consts[n].raw * x.raw ** n) << ((order - n) * f)
    return FixedValue(out.saturate(round_shift(acc, order * f)), out)


def _horner(x: FixedValue, consts: List[FixedValue], out: FixedFormat) -> FixedValue:
    xw = fx_convert(x, out)
    acc = consts[-1]
    for c in reversed(consts[:-1]):
        acc = fx_add(fx_mul(acc, xw), c)
    return acc


def eval_taylor_exp(
    x: FixedValue,
    order: int,
    fmt: Optional[FixedFormat] = None,
    scheme: TaylorScheme = TaylorScheme.POWER_SUM,
) -> FixedValue:
    """
    Evaluate Σ_{n=0}^{order} x^n/n! in fixed point.

    Args:
        x: Operand
        order: Series order (1..3)
        fmt: Result format; defaults to x's own format, where the result
            saturates whenever e^x exceeds the format maximum
        scheme: Evaluation scheme

    Returns:
        The series value in ``fmt``
    """
    out = fmt or x.format
    consts = taylor_constants(order, out)
    if scheme is TaylorScheme.HORNER:
        return _horner(x, consts, out)
    return _power_sum(x, consts, out)


class TaylorKernel(BaseExpKernel):
    """Taylor-series kernel over the open domain ]lo, hi[."""

    def __init__(self, spec: ExpKernelSpec):
        super().__init__(spec)
        self.order = spec.order
        self.scheme = spec.scheme
        self.constants = taylor_constants(self.order, self.format)
        self.real_coefficients = real_taylor_coefficients(self.order)
        logger.debug(
            "taylor kernel %s: constants %s in %s",
            self.name, [c.raw for c in self.constants], self.format,
        )

    def evaluate(self, x: FixedValue) -> FixedValue:
        self._check_operand(x)
        if self.scheme is TaylorScheme.HORNER:
            return _horner(x, self.constants, self.format)
        return _power_sum(x, self.constants, self.format)

    def evaluate_real(self, xs: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(xs, dtype=np.float64), self.real_coefficients)
