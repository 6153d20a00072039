"""
LUT serialization for downstream synthesis flows.

CSV layout (byte-stable, ``\\n`` line endings):

    # segments=8,degree=linear,domain_lo=-1.0,domain_hi=1.0,format=q16.15,coeff_format=q16.13,shift_amount=13,bias=32768
    segment,lo,hi,m_raw,b_raw,m_real,b_real
    0,-1.0,-0.75,...

The JSON document mirrors the same fields. Reals are written with ``repr``
so that parsing restores the table bit for bit.
"""
from typing import List, Optional, Tuple
import csv
import io

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.fixed_point import parse_format
from ..utils.exceptions import ConfigurationError
from .lut import COEFF_NAMES, LutTable, SegmentIndexMap
from .spec import LutDegree

LUT_FORMATS = ("csv", "json")
_META_PREFIX = "# "
_META_KEYS = ("segments", "degree", "domain_lo", "domain_hi", "format", "coeff_format", "shift_amount", "bias")


class LutSegment(BaseModel):
    """One table row."""
    model_config = ConfigDict(extra="forbid")

    segment: int
    lo: float
    hi: float
    raw: List[int]
    real: List[float]


class LutDocument(BaseModel):
    """JSON form of a LutTable."""
    model_config = ConfigDict(extra="forbid")

    segments: int = Field(..., ge=1)
    degree: LutDegree
    domain_lo: float
    domain_hi: float
    format: str
    coeff_format: str
    shift_amount: int = Field(..., ge=0)
    bias: int
    coefficients: List[str]
    rows: List[LutSegment]


def _check_kind(kind: str) -> str:
    kind = kind.lower()
    if kind not in LUT_FORMATS:
        raise ConfigurationError(f"unknown lut export format {kind!r}; expected one of {LUT_FORMATS}")
    return kind


def _metadata(table: LutTable) -> dict:
    return {
        "segments": table.segments,
        "degree": table.degree.value,
        "domain_lo": table.domain_lo,
        "domain_hi": table.domain_hi,
        "format": str(table.format),
        "coeff_format": str(table.coeff_format),
        "shift_amount": table.shift_amount,
        "bias": table.bias,
    }


def _to_document(table: LutTable) -> LutDocument:
    rows = []
    for p in range(table.segments):
        lo, hi = table.segment_bounds(p)
        rows.append(LutSegment(
            segment=p, lo=lo, hi=hi,
            raw=list(table.coeffs_raw[p]), real=list(table.coeffs_real[p]),
        ))
    return LutDocument(coefficients=list(table.coeff_names), rows=rows, **_metadata(table))


def export_lut(table: LutTable, kind: str = "csv") -> bytes:
    """
    Serialize a table deterministically.

    Args:
        table: Built table
        kind: ``csv`` or ``json``

    Returns:
        UTF-8 encoded document
    """
    if _check_kind(kind) == "json":
        return (_to_document(table).model_dump_json(indent=2) + "\n").encode("utf-8")

    names = table.coeff_names
    buffer = io.StringIO()
    meta = ",".join(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}"
                    for key, value in _metadata(table).items())
    buffer.write(_META_PREFIX + meta + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["segment", "lo", "hi"] + [f"{n}_raw" for n in names] + [f"{n}_real" for n in names])
    for row in _to_document(table).rows:
        writer.writerow([row.segment, repr(row.lo), repr(row.hi)] + row.raw + [repr(v) for v in row.real])
    return buffer.getvalue().encode("utf-8")


def _from_document(doc: LutDocument) -> LutTable:
    if len(doc.rows) != doc.segments:
        raise ConfigurationError(f"lut document declares {doc.segments} segments but holds {len(doc.rows)} rows")
    width = len(COEFF_NAMES[doc.degree])
    coeffs_raw: List[Tuple[int, ...]] = []
    coeffs_real: List[Tuple[float, ...]] = []
    for expected, row in enumerate(doc.rows):
        if row.segment != expected or len(row.raw) != width or len(row.real) != width:
            raise ConfigurationError(f"malformed lut row for segment {row.segment}")
        coeffs_raw.append(tuple(row.raw))
        coeffs_real.append(tuple(row.real))
    return LutTable(
        degree=doc.degree,
        domain_lo=doc.domain_lo,
        domain_hi=doc.domain_hi,
        segments=doc.segments,
        format=parse_format(doc.format),
        coeff_format=parse_format(doc.coeff_format),
        index_map=SegmentIndexMap(bias=doc.bias, shift_amount=doc.shift_amount, segments=doc.segments),
        coeffs_real=tuple(coeffs_real),
        coeffs_raw=tuple(coeffs_raw),
    )


def _parse_csv(text: str) -> LutDocument:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_META_PREFIX):
        raise ConfigurationError("lut csv is missing its metadata line")
    meta = {}
    for item in lines[0][len(_META_PREFIX):].split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"malformed lut metadata item {item!r}")
        meta[key.strip()] = value.strip()
    missing = [key for key in _META_KEYS if key not in meta]
    if missing:
        raise ConfigurationError(f"lut metadata lacks {', '.join(missing)}")

    reader = csv.DictReader(lines[1:])
    names = COEFF_NAMES[LutDegree(meta["degree"])]
    rows = []
    try:
        for record in reader:
            rows.append(LutSegment(
                segment=int(record["segment"]),
                lo=float(record["lo"]),
                hi=float(record["hi"]),
                raw=[int(record[f"{n}_raw"]) for n in names],
                real=[float(record[f"{n}_real"]) for n in names],
            ))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed lut csv: {e}") from e
    return LutDocument(coefficients=list(names), rows=rows, **meta)


def parse_lut(payload: bytes, kind: Optional[str] = None) -> LutTable:
    """
    Rebuild a table from ``export_lut`` output.

    Args:
        payload: Serialized table
        kind: ``csv`` or ``json``; detected from the first byte when omitted

    Raises:
        ConfigurationError: If the document is malformed
    """
    text = payload.decode("utf-8")
    if kind is None:
        kind = "json" if text.lstrip().startswith("{") else "csv"
    try:
        if _check_kind(kind) == "json":
            return _from_document(LutDocument.model_validate_json(text))
        return _from_document(_parse_csv(text))
    except ValidationError as e:
        raise ConfigurationError(f"malformed lut document: {e}") from e
