"""
Logit sources for experiments: uniform random, fully connected layer, file.

Randomness comes from PCG64 generators keyed by (seed, trial, format)
through numpy's SeedSequence spawn keys, so every trial draws the same
numbers no matter which thread runs it or in what order.
"""
from pathlib import Path
from typing import List, Optional, Sequence, Union
import math

import numpy as np

from ..config.paths import PathManager
from ..core.fixed_point import FixedFormat
from ..softmax.engine import LogitsVector
from ..softmax.fc_layer import fc_layer_reference, stabilizing_scale
from ..utils.exceptions import ConfigurationError, VectorParseError
from .models import SourceKind, SourceSpec

MAX_DISTINCT_ATTEMPTS = 1000


def trial_generator(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 stream for a spawn key, e.g. (trial, format index)."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(sequence))


def open_uniform(rng: np.random.Generator, span: float, size) -> np.ndarray:
    """Uniform draws over the open interval ]-span, span[."""
    values = rng.uniform(-span, span, size=size)
    edge = values <= -span
    while np.any(edge):
        values[edge] = rng.uniform(-span, span, size=int(np.count_nonzero(edge)))
        edge = values <= -span
    return values


def _open_raw_bounds(span: float, fmt: FixedFormat):
    lo = math.floor(-span * fmt.scale) + 1
    hi = math.ceil(span * fmt.scale) - 1
    return max(lo, fmt.raw_min), min(hi, fmt.raw_max)


def _quantize_into(reals: np.ndarray, fmt: FixedFormat, span: float) -> np.ndarray:
    """Round to the raw grid (half away from zero) inside ]-span, span[."""
    scaled = reals * fmt.scale
    raws = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    lo, hi = _open_raw_bounds(span, fmt)
    return np.clip(raws, lo, hi).astype(np.int64)


def parse_vector_text(text: str) -> List[float]:
    """
    Parse one decimal value per line; blank lines and ``#`` comments are skipped.

    Raises:
        VectorParseError: On a malformed or non-finite value, or an empty vector
    """
    values = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            value = float(content)
        except ValueError:
            raise VectorParseError(f"not a number: {content!r}", line_number=number)
        if not math.isfinite(value):
            raise VectorParseError(f"non-finite value {content!r}", line_number=number)
        values.append(value)
    if not values:
        raise VectorParseError("vector file holds no values")
    return values


def read_vector_file(path: Union[str, Path]) -> List[float]:
    """Read a plain-text vector file (see :func:`parse_vector_text`)."""
    try:
        return parse_vector_text(PathManager.read_text(path))
    except VectorParseError as e:
        error = VectorParseError(f"{path}: {e}")
        error.line_number = e.line_number
        raise error from e


def _draw(source: SourceSpec, rng: np.random.Generator, k: int) -> np.ndarray:
    if source.kind is SourceKind.UNIFORM:
        return open_uniform(rng, source.span, k)
    inputs = source.inputs or k
    W = open_uniform(rng, 1.0, (k, inputs))
    x = open_uniform(rng, 1.0, inputs)
    b = open_uniform(rng, 1.0, k)
    return fc_layer_reference(W, x, b, stabilizing_scale(inputs))


def generate_logits(
    source: SourceSpec,
    rng: np.random.Generator,
    k: int,
    fmt: FixedFormat,
    distinct: bool = False,
    file_values: Optional[Sequence[float]] = None,
) -> LogitsVector:
    """
    Draw (or load) one logits vector.

    Args:
        source: Source description
        rng: Trial generator (see :func:`trial_generator`)
        k: Vector length (file sources use the file's length)
        fmt: Logits format
        distinct: Redraw until the quantized logits are pairwise distinct
        file_values: Pre-read values of a file source

    Returns:
        Quantized logits; random sources stay strictly inside their interval

    Raises:
        ConfigurationError: If distinct logits are impossible in ``fmt``
        VectorParseError: If a file source cannot be parsed
    """
    if source.kind is SourceKind.FILE:
        values = file_values if file_values is not None else read_vector_file(source.path)
        return LogitsVector.from_reals(values, fmt)

    span = source.span if source.kind is SourceKind.UNIFORM else 1.0
    lo, hi = _open_raw_bounds(span, fmt)
    if distinct and k > hi - lo + 1:
        raise ConfigurationError(f"{k} distinct logits do not exist in ]-{span}, {span}[ at {fmt}")

    for _ in range(MAX_DISTINCT_ATTEMPTS):
        raws = _quantize_into(_draw(source, rng, k), fmt, span)
        if not distinct or np.unique(raws).size == k:
            return LogitsVector.from_raws(raws.tolist(), fmt)
    raise ConfigurationError(
        f"no vector of {k} distinct logits in {fmt} after {MAX_DISTINCT_ATTEMPTS} draws"
    )
