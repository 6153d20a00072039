"""Error metrics against the exact softmax."""
from .errors import (
    CSV_FIELDS,
    ErrorReport,
    MeasurementMode,
    MomentAccumulator,
    argmax_agreement,
    average_reports,
    error_moments,
    report_from_moments,
    rmse,
)

__all__ = [
    'CSV_FIELDS',
    'ErrorReport',
    'MeasurementMode',
    'MomentAccumulator',
    'argmax_agreement',
    'average_reports',
    'error_moments',
    'report_from_moments',
    'rmse',
]
