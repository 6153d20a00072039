"""
Report rendering and writing.

Every artifact is rendered fully in memory and written atomically, so a
failure never leaves a partial file, and the same record always renders to
the same bytes.
"""
from pathlib import Path
from typing import List, Optional, Union
import csv
import io

from ..config.paths import PathManager
from ..metrics.errors import CSV_FIELDS
from ..utils.logger import get_logger
from .models import RunRecord

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _reference_keys(record: RunRecord) -> List[str]:
    return sorted({key for values in record.reference.values() for key in values})


def render_report_csv(record: RunRecord, compare_reference: bool = False) -> str:
    """Aggregated reports, one row per (kernel, format) pair."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    keys = _reference_keys(record) if compare_reference else []
    writer.writerow(list(CSV_FIELDS) + [f"reference_{key}" for key in keys])
    for report in record.reports:
        row = report.to_row()
        if keys:
            reference = record.reference.get(f"{report.method}@{report.config}", {})
            row += [repr(reference[key]) if key in reference else "" for key in keys]
        writer.writerow(row)
    return buffer.getvalue()


def render_trials_csv(record: RunRecord) -> str:
    """Per-trial reports, in trial order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["trial"] + list(CSV_FIELDS))
    for row in record.trial_rows:
        writer.writerow([str(row.trial)] + row.report.to_row())
    return buffer.getvalue()


def render_summary_json(record: RunRecord) -> str:
    """RunRecord as JSON (stage timings excluded)."""
    return record.model_dump_json(indent=2) + "\n"


def write_reports(
    record: RunRecord,
    out: PathLike,
    trials_out: Optional[PathLike] = None,
    summary_out: Optional[PathLike] = None,
    compare_reference: bool = False,
) -> List[Path]:
    """
    Render and write the report artifacts of a run.

    Args:
        record: Finished run
        out: Aggregated CSV path
        trials_out: Per-trial CSV path (optional)
        summary_out: JSON summary path (optional)
        compare_reference: Append published figures as extra CSV columns

    Returns:
        Written paths

    Raises:
        ArtifactIOError: If a file cannot be written
    """
    targets = [(out, render_report_csv(record, compare_reference))]
    if trials_out:
        targets.append((trials_out, render_trials_csv(record)))
    for path, _ in targets:
        record.add_artifact(path)
    if summary_out:
        record.add_artifact(summary_out)
        targets.append((summary_out, render_summary_json(record)))

    written = []
    for path, text in targets:
        written.append(PathManager.write_text(path, text))
        logger.info("wrote %s", path)
    return written
