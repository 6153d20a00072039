"""
Absolute error metrics of approximate softmax outputs.

Moments of the signed error e_i = exact_i - approx_i are accumulated in one
pass over chunks and merged pairwise, so partial results computed on
separate partitions combine deterministically.
"""
from enum import Enum
from typing import List, Optional, Sequence
import math

import numpy as np
from pydantic import BaseModel, Field

from ..utils.exceptions import LengthMismatchError

CSV_FIELDS = (
    "method", "config", "mode", "n", "seed",
    "rmse", "variance", "stddev", "max_abs_err", "argmax_agreement",
)
DEFAULT_CHUNK = 1 << 16


class MeasurementMode(str, Enum):
    QUANTIZED = "quantized"
    METHOD_ERROR = "method-error"


def _pair(exact, approx):
    a = np.asarray(exact, dtype=np.float64).reshape(-1)
    b = np.asarray(approx, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise LengthMismatchError(f"vectors of length {a.size} and {b.size}")
    return a, b


class MomentAccumulator:
    """
    Streaming count, mean, M2, mean square and max |e| of an error sequence.

    Chunks are reduced with numpy and combined with the pairwise (Chan)
    update, which keeps the variance stable for long sequences.
    """

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.mean_square = 0.0
        self.max_abs = 0.0

    def update(self, errors, chunk: int = DEFAULT_CHUNK) -> 'MomentAccumulator':
        errors = np.asarray(errors, dtype=np.float64).reshape(-1)
        for start in range(0, errors.size, chunk):
            part = errors[start:start + chunk]
            other = MomentAccumulator()
            other.count = int(part.size)
            other.mean = float(np.mean(part))
            other.m2 = float(np.sum((part - other.mean) ** 2))
            other.mean_square = float(np.mean(part * part))
            other.max_abs = float(np.max(np.abs(part)))
            self.merge(other)
        return self

    def merge(self, other: 'MomentAccumulator') -> 'MomentAccumulator':
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            self.mean_square, self.max_abs = other.mean_square, other.max_abs
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.mean_square += (other.mean_square - self.mean_square) * other.count / total
        self.max_abs = max(self.max_abs, other.max_abs)
        self.count = total
        return self

    @property
    def variance(self) -> float:
        return self.m2 / self.count if self.count else 0.0

    @property
    def rmse(self) -> float:
        return math.sqrt(max(self.mean_square, 0.0))


class ErrorReport(BaseModel):
    """Error metrics of one experiment (one kernel/format pair)."""
    rmse: float = Field(..., ge=0)
    variance: float = Field(..., ge=0)
    stddev: float = Field(..., ge=0)
    max_abs_err: float = Field(..., ge=0)
    argmax_agreement: Optional[float] = Field(default=None, ge=0, le=1)
    n: int = Field(..., ge=0)
    mode: MeasurementMode = MeasurementMode.QUANTIZED
    method: str = ""
    config: str = ""
    seed: Optional[int] = None
    trials: int = Field(default=1, ge=1)

    def to_row(self) -> List[str]:
        """CSV row in CSV_FIELDS order."""
        def number(value: Optional[float]) -> str:
            return "" if value is None else repr(float(value))

        return [
            self.method, self.config, self.mode.value, str(self.n),
            "" if self.seed is None else str(self.seed),
            number(self.rmse), number(self.variance), number(self.stddev),
            number(self.max_abs_err), number(self.argmax_agreement),
        ]


def rmse(exact, approx) -> float:
    """Root mean square of exact_i - approx_i."""
    a, b = _pair(exact, approx)
    if a.size < 1:
        raise LengthMismatchError("rmse needs at least one element")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def error_moments(exact, approx, **labels) -> ErrorReport:
    """
    Full error report of one comparison.

    Args:
        exact: Oracle values
        approx: Approximate values
        **labels: ErrorReport labels (method, config, mode, seed, argmax_agreement)

    Raises:
        LengthMismatchError: On length mismatch or fewer than two elements
    """
    a, b = _pair(exact, approx)
    if a.size < 2:
        raise LengthMismatchError("variance needs at least two elements")
    acc = MomentAccumulator().update(a - b)
    return report_from_moments(acc, **labels)


def report_from_moments(acc: MomentAccumulator, **labels) -> ErrorReport:
    variance = acc.variance
    return ErrorReport(
        rmse=acc.rmse,
        variance=variance,
        stddev=math.sqrt(variance),
        max_abs_err=acc.max_abs,
        n=acc.count,
        **labels,
    )


def _argmax_of(item) -> int:
    if hasattr(item, "argmax") and not isinstance(item, np.ndarray):
        return int(item.argmax)
    if isinstance(item, (int, np.integer)):
        return int(item)
    return int(np.argmax(np.asarray(item, dtype=np.float64)))


def argmax_agreement(exact_batch: Sequence, approx_batch: Sequence) -> float:
    """
    Fraction of vectors whose approximate argmax equals the exact one.

    Either batch may hold vectors, precomputed indices, or softmax results;
    ties resolve to the lowest index on both sides.
    """
    if len(exact_batch) != len(approx_batch):
        raise LengthMismatchError(f"batches of {len(exact_batch)} and {len(approx_batch)} vectors")
    if not exact_batch:
        raise LengthMismatchError("argmax agreement needs at least one vector")
    hits = sum(_argmax_of(e) == _argmax_of(a) for e, a in zip(exact_batch, approx_batch))
    return hits / len(exact_batch)


def average_reports(reports: Sequence[ErrorReport]) -> ErrorReport:
    """
    Average per-trial reports; labels come from the first.

    ``rmse`` and ``variance`` are per-trial means and ``stddev`` is derived
    from the averaged variance. Averaged RMSE is not a pooled RMSE, so
    ``rmse ** 2 >= variance`` need not hold for the result.
    """
    if not reports:
        raise LengthMismatchError("no reports to average")
    first = reports[0]

    def mean(values) -> float:
        return math.fsum(values) / len(values)

    agreements = [r.argmax_agreement for r in reports if r.argmax_agreement is not None]
    variance = mean([r.variance for r in reports])
    return first.model_copy(update={
        "rmse": mean([r.rmse for r in reports]),
        "variance": variance,
        "stddev": math.sqrt(variance),
        "max_abs_err": max(r.max_abs_err for r in reports),
        "argmax_agreement": mean(agreements) if agreements else None,
        "n": sum(r.n for r in reports),
        "trials": len(reports),
    })
