"""
Top-1 proxy experiment.

Full-model accuracy hinges on whether the approximate softmax keeps the top
class; this experiment measures exactly that (argmax agreement with the
exact softmax) over a batch of synthetic logit vectors.
"""
from typing import Dict, Optional

from ..kernels.factory import KernelFactory
from ..metrics.errors import ErrorReport
from ..utils.exceptions import ConfigurationError
from .base_experiment import BaseExperiment
from .models import ExperimentConfig, RunRecord, SourceKind
from .reference_values import top1_accuracy, top1_delta


class TopkExperiment(BaseExperiment):
    """Argmax agreement per kernel, with published Top-1 deltas as context."""

    name = "topk"

    def validate(self) -> None:
        if self.config.source.kind is SourceKind.FILE:
            raise ConfigurationError("the top-1 proxy needs a random source (uniform or fc-layer)")

    def reference_for(self, report: ErrorReport) -> Optional[Dict[str, float]]:
        delta = top1_delta(self.config.k, report.method)
        if delta is None:
            return None
        return {"top1": top1_accuracy(self.config.k, report.method), "top1_delta": delta}


def run_topk_proxy(config: ExperimentConfig, factory: Optional[KernelFactory] = None) -> RunRecord:
    """Run the Top-1 proxy for a config (one trial per logit vector)."""
    return TopkExperiment(config, factory=factory).run()
