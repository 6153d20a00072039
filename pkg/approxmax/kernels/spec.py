"""
Exponential kernel selection.

A kernel spec names the approximation method and its parameters, the format
of the operands it receives and the working format it computes in. Specs
are spelled as short strings in configs and on the command line:

    exact
    taylor1, taylor2, taylor3            (full-width power-sum evaluation)
    taylor3-horner                       (per-stage rounded Horner dataflow)
    lut-linear-64, lut-quadratic-16      (P = segment count, a power of two)
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple
import math
import re

from ..core.fixed_point import FixedFormat
from ..utils.exceptions import ConfigurationError

DEFAULT_DOMAIN: Tuple[float, float] = (-1.0, 1.0)
MIN_SEGMENTS = 2
MAX_SEGMENTS = 4096
MAX_TAYLOR_ORDER = 3

_TAYLOR_RE = re.compile(r"^taylor-?([0-9]+)(-horner)?$")
_LUT_RE = re.compile(r"^lut-(linear|quadratic)-([0-9]+)$")


class KernelMethod(str, Enum):
    EXACT = "exact"
    TAYLOR = "taylor"
    LUT = "lut"


class LutDegree(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


class TaylorScheme(str, Enum):
    POWER_SUM = "power-sum"
    HORNER = "horner"


def default_working_format(fmt: FixedFormat, domain: Tuple[float, float] = DEFAULT_DOMAIN) -> FixedFormat:
    """
    Working format of the exponential unit for operands in ``fmt``.

    Same width as the operands, with the fewest integer bits that hold both
    the domain bounds and e^hi.
    """
    lo, hi = domain
    magnitude = max(math.exp(hi), abs(lo), abs(hi))
    return fmt.headroom_for(magnitude)


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class ExpKernelSpec:
    """
    Selection of an exponential approximation.

    ``format`` is the operand (logits) format. ``work_format`` overrides the
    working format the kernel computes and answers in; left unset, it is
    derived with :func:`default_working_format`.
    """
    method: KernelMethod
    format: FixedFormat
    order: Optional[int] = None
    degree: Optional[LutDegree] = None
    segments: Optional[int] = None
    scheme: TaylorScheme = TaylorScheme.POWER_SUM
    domain: Tuple[float, float] = DEFAULT_DOMAIN
    work_format: Optional[FixedFormat] = None

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise ConfigurationError(f"invalid kernel domain [{lo}, {hi})")
        if self.method is KernelMethod.TAYLOR:
            if self.order is None or not 1 <= self.order <= MAX_TAYLOR_ORDER:
                raise ConfigurationError(
                    f"taylor order must be in 1..{MAX_TAYLOR_ORDER}, got {self.order}"
                )
        elif self.method is KernelMethod.LUT:
            if self.degree is None:
                raise ConfigurationError("lut kernels need a degree (linear or quadratic)")
            if self.segments is None or not is_power_of_two(self.segments):
                raise ConfigurationError(
                    f"lut segment count must be a power of two, got {self.segments}"
                )
            if not MIN_SEGMENTS <= self.segments <= MAX_SEGMENTS:
                raise ConfigurationError(
                    f"lut segment count must be in [{MIN_SEGMENTS}, {MAX_SEGMENTS}], got {self.segments}"
                )

    @classmethod
    def parse(
        cls,
        text: str,
        fmt: FixedFormat,
        domain: Tuple[float, float] = DEFAULT_DOMAIN,
        work_format: Optional[FixedFormat] = None,
    ) -> 'ExpKernelSpec':
        """
        Parse a kernel spec string for operands in ``fmt``.

        Raises:
            ConfigurationError: If the string names no known kernel
        """
        name = text.strip().lower()
        if name == "exact":
            return cls(KernelMethod.EXACT, fmt, domain=domain, work_format=work_format)

        match = _TAYLOR_RE.match(name)
        if match:
            scheme = TaylorScheme.HORNER if match.group(2) else TaylorScheme.POWER_SUM
            return cls(
                KernelMethod.TAYLOR, fmt, order=int(match.group(1)), scheme=scheme,
                domain=domain, work_format=work_format,
            )

        match = _LUT_RE.match(name)
        if match:
            return cls(
                KernelMethod.LUT, fmt, degree=LutDegree(match.group(1)),
                segments=int(match.group(2)), domain=domain, work_format=work_format,
            )

        raise ConfigurationError(
            f"unknown kernel {text!r}; expected exact, taylor<1-3>[-horner] "
            f"or lut-<linear|quadratic>-<P>"
        )

    @property
    def name(self) -> str:
        if self.method is KernelMethod.TAYLOR:
            suffix = "-horner" if self.scheme is TaylorScheme.HORNER else ""
            return f"taylor{self.order}{suffix}"
        if self.method is KernelMethod.LUT:
            return f"lut-{self.degree.value}-{self.segments}"
        return "exact"

    @property
    def working_format(self) -> FixedFormat:
        if self.work_format is not None:
            return self.work_format
        return default_working_format(self.format, self.domain)

    def with_format(self, fmt: FixedFormat) -> 'ExpKernelSpec':
        """Same kernel for operands in another format."""
        return replace(self, format=fmt)

    def __str__(self) -> str:
        return f"{self.name}@{self.format}"
