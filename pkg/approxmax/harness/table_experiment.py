"""
Error-table experiment: RMSE, variance, standard deviation and max error of
every (kernel, format) pair against the exact softmax.
"""
from typing import Dict, Optional

from ..kernels.factory import KernelFactory
from ..metrics.errors import ErrorReport
from .base_experiment import BaseExperiment
from .models import ExperimentConfig, RunRecord
from .reference_values import reference_errors


class TableExperiment(BaseExperiment):
    """Measures error moments per kernel; attaches published figures as context."""

    name = "table"

    def reference_for(self, report: ErrorReport) -> Optional[Dict[str, float]]:
        return reference_errors(report.method)


def run_table_experiment(config: ExperimentConfig, factory: Optional[KernelFactory] = None) -> RunRecord:
    """Run the error-table experiment for a config."""
    return TableExperiment(config, factory=factory).run()
