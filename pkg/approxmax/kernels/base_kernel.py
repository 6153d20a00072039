"""
Base Exponential Kernel

All exponential kernels inherit from this class. A kernel receives operands
in its input format, clamps them into its domain when asked to, and answers
in its working format.
"""
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Tuple
import math

import numpy as np

from ..core.fixed_point import FixedFormat, FixedValue
from ..utils.exceptions import FormatMismatchError
from .spec import ExpKernelSpec


class BaseExpKernel(ABC):
    """
    Base class for all exponential approximations.

    Subclasses implement ``evaluate`` (bit-accurate fixed point) and
    ``evaluate_real`` (float64 with real coefficients, used to isolate the
    approximation's method error from quantization error).

    Usage:
        class MyKernel(BaseExpKernel):
            def evaluate(self, x): ...
            def evaluate_real(self, xs): ...
    """

    def __init__(self, spec: ExpKernelSpec):
        """
        Initialize base kernel.

        Args:
            spec: Kernel selection, operand format and working format
        """
        self.spec = spec
        self.input_format: FixedFormat = spec.format
        self.format: FixedFormat = spec.working_format
        self.domain_raw: Tuple[int, int] = self._domain_raw_bounds()

    @property
    def name(self) -> str:
        return self.spec.name

    def _domain_raw_bounds(self) -> Tuple[int, int]:
        """Inclusive raw bounds of the open domain ]lo, hi[ in the input format."""
        lo, hi = self.spec.domain
        fmt = self.input_format
        lo_raw = math.floor(Fraction(lo) * fmt.scale) + 1
        hi_raw = math.ceil(Fraction(hi) * fmt.scale) - 1
        return max(lo_raw, fmt.raw_min), min(hi_raw, fmt.raw_max)

    def _check_operand(self, x: FixedValue) -> None:
        if x.format != self.input_format:
            raise FormatMismatchError(
                f"kernel {self.name} expects operands in {self.input_format}, got {x.format}"
            )

    def in_domain(self, x: FixedValue) -> bool:
        lo_raw, hi_raw = self.domain_raw
        return lo_raw <= x.raw <= hi_raw

    def clamp(self, x: FixedValue) -> Tuple[FixedValue, bool]:
        """
        Clamp an operand into the kernel domain.

        Returns:
            The (possibly clamped) operand and whether a clamp happened
        """
        self._check_operand(x)
        lo_raw, hi_raw = self.domain_raw
        if x.raw < lo_raw:
            return FixedValue(lo_raw, x.format), True
        if x.raw > hi_raw:
            return FixedValue(hi_raw, x.format), True
        return x, False

    def clamp_real(self, xs: np.ndarray) -> Tuple[np.ndarray, int]:
        """Clamp real operands into the domain; returns values and clamp count."""
        lo_raw, hi_raw = self.domain_raw
        lo = math.ldexp(lo_raw, -self.input_format.frac_bits)
        hi = math.ldexp(hi_raw, -self.input_format.frac_bits)
        clamped = np.clip(xs, lo, hi)
        return clamped, int(np.count_nonzero(clamped != xs))

    @abstractmethod
    def evaluate(self, x: FixedValue) -> FixedValue:
        """
        Approximate e^x in fixed point.

        Args:
            x: Operand in the kernel's input format

        Returns:
            Value in the kernel's working format (saturated if out of range)
        """
        raise NotImplementedError(f"{self.__class__.__name__} must implement evaluate()")

    @abstractmethod
    def evaluate_real(self, xs: np.ndarray) -> np.ndarray:
        """
        Approximate e^x with real coefficients in float64.

        Args:
            xs: Operands (already inside the domain)

        Returns:
            Array of approximations, same shape as xs
        """
        raise NotImplementedError(f"{self.__class__.__name__} must implement evaluate_real()")

    def __call__(self, x: FixedValue) -> FixedValue:
        return self.evaluate(x)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name}, {self.input_format} -> {self.format})"
