"""
Base class for all experiments.

Provides kernel construction, seeded logit generation, the per-trial
measurement against the exact oracle, parallel trial execution and
aggregation. Subclasses add validation and reference context.
"""
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import time

import mpmath
import numpy as np

from ..config.settings import RuntimeSettings
from ..core.fixed_point import FixedFormat, fx_convert
from ..kernels.base_kernel import BaseExpKernel
from ..kernels.factory import KernelFactory
from ..kernels.spec import ExpKernelSpec
from ..metrics.errors import (
    ErrorReport,
    MeasurementMode,
    MomentAccumulator,
    average_reports,
    report_from_moments,
)
from ..softmax.engine import (
    LogitsVector,
    StabilizerConfig,
    prescale,
    softmax_approx,
    softmax_approx_real,
    softmax_exact,
)
from ..utils.exceptions import ConfigurationError, NumericDegenerateError
from ..utils.logger import get_logger
from .logits import generate_logits, read_vector_file, trial_generator
from .models import ExperimentConfig, PairCounts, RunRecord, SourceKind, Target, TrialRow

logger = get_logger(__name__)


@dataclass(frozen=True)
class KernelPair:
    """One (kernel, format) combination of an experiment."""
    format_index: int
    format: FixedFormat
    kernel: BaseExpKernel

    @property
    def key(self) -> str:
        return f"{self.kernel.name}@{self.format}"


@dataclass(frozen=True)
class Measurement:
    report: ErrorReport
    clamps: int
    saturations: int


class BaseExperiment(ABC):
    """
    Abstract base class for experiments.

    Usage:
        record = TableExperiment(config).run()
    """

    name = "experiment"

    def __init__(
        self,
        config: ExperimentConfig,
        factory: Optional[KernelFactory] = None,
        settings: Optional[RuntimeSettings] = None,
    ):
        """
        Initialize base experiment.

        Args:
            config: Validated experiment config
            factory: Kernel factory (shared cache); created from settings if omitted
            settings: Runtime settings; loaded from the environment if omitted
        """
        self.config = config
        self.settings = settings or (factory.settings if factory else RuntimeSettings.from_env())
        self.factory = factory or KernelFactory(self.settings)
        self.pairs: List[KernelPair] = []
        self._file_values: Optional[List[float]] = None

    def validate(self) -> None:
        """Check experiment-specific preconditions (hook)."""

    @abstractmethod
    def reference_for(self, report: ErrorReport) -> Optional[Dict[str, float]]:
        """Published context figures for one aggregated report, if any."""
        raise NotImplementedError(f"{self.__class__.__name__} must implement reference_for()")

    def _build_pairs(self) -> List[KernelPair]:
        pairs = []
        for index, fmt in enumerate(self.config.parsed_formats):
            for text in self.config.kernels:
                try:
                    spec = ExpKernelSpec.parse(text, fmt, work_format=self.config.parsed_kernel_format)
                    kernel = self.factory.create(spec)
                except ConfigurationError as e:
                    raise ConfigurationError(f"kernel {text} with format {fmt}: {e}") from e
                pairs.append(KernelPair(index, fmt, kernel))
        return pairs

    def _logits(self, trial: int, format_index: int, fmt: FixedFormat) -> LogitsVector:
        cfg = self.config
        rng = trial_generator(cfg.seed, trial, format_index)
        logits = generate_logits(cfg.source, rng, cfg.k, fmt, distinct=cfg.distinct,
                                 file_values=self._file_values)
        if cfg.prescale_shift:
            logits = prescale(logits, StabilizerConfig(cfg.prescale_shift))
        return logits

    def _exact(self, reals: Sequence[float]) -> List[float]:
        if self.config.target is Target.SOFTMAX:
            return softmax_exact(reals, prec=self.settings.mp_prec)
        with mpmath.workprec(self.settings.mp_prec):
            return [float(mpmath.exp(mpmath.mpf(x))) for x in reals]

    def _approximate(self, kernel: BaseExpKernel, logits: LogitsVector) -> Tuple[np.ndarray, int, int, int]:
        """Approximate values, argmax, clamp count and saturation count."""
        cfg = self.config
        quantized = cfg.mode is MeasurementMode.QUANTIZED
        if cfg.target is Target.SOFTMAX:
            if quantized:
                result = softmax_approx(logits, kernel, cfg.parsed_output_format)
                return np.array(result.reals()), result.argmax, result.clamp_count, result.saturation_count
            result = softmax_approx_real(logits, kernel)
            return result.probs, result.argmax, result.clamp_count, 0

        if quantized:
            values, clamps, saturations = [], 0, 0
            for x in logits.values:
                operand, clamped = kernel.clamp(fx_convert(x, kernel.input_format))
                e = kernel.evaluate(operand)
                values.append(e.real)
                clamps += clamped
                saturations += e.at_max
            values = np.array(values)
            return values, int(np.argmax(values)), clamps, saturations
        clamped, clamps = kernel.clamp_real(np.array(logits.reals()))
        values = kernel.evaluate_real(clamped)
        return values, int(np.argmax(values)), clamps, 0

    def _run_trial(self, trial: int) -> List[Measurement]:
        measurements = []
        by_format: Dict[int, Tuple[LogitsVector, np.ndarray]] = {}
        for pair in self.pairs:
            if pair.format_index not in by_format:
                logits = self._logits(trial, pair.format_index, pair.format)
                by_format[pair.format_index] = (logits, np.array(self._exact(logits.reals())))
            logits, exact = by_format[pair.format_index]

            try:
                approx, argmax, clamps, saturations = self._approximate(pair.kernel, logits)
            except NumericDegenerateError:
                logger.error("trial %d: %s failed (seed %d)", trial, pair.key, self.config.seed)
                raise
            acc = MomentAccumulator().update(exact - approx)
            report = report_from_moments(
                acc,
                method=pair.kernel.name,
                config=str(pair.format),
                mode=self.config.mode,
                seed=self.config.seed,
                argmax_agreement=1.0 if argmax == int(np.argmax(exact)) else 0.0,
            )
            measurements.append(Measurement(report, clamps, saturations))
        return measurements

    def _run_trials(self) -> List[List[Measurement]]:
        trials = range(self.config.trials)
        workers = min(self.settings.max_workers, self.config.trials)
        if workers <= 1:
            return [self._run_trial(t) for t in trials]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            # map yields in trial order regardless of completion order
            return list(executor.map(self._run_trial, trials))

    def run(self) -> RunRecord:
        """
        Run every trial for every (kernel, format) pair.

        Returns:
            RunRecord with one aggregated report per pair and per-trial rows

        Raises:
            ConfigurationError: If a kernel cannot be built for a format
            NumericDegenerateError: If a softmax denominator vanishes
        """
        cfg = self.config
        self.validate()
        record = RunRecord(experiment=self.name, config=cfg)

        start = time.perf_counter()
        self.pairs = self._build_pairs()
        if cfg.source.kind is SourceKind.FILE:
            self._file_values = read_vector_file(cfg.source.path)
        record.stage_times["build"] = time.perf_counter() - start
        logger.info("%s: %d pairs, %d trials of k=%d (%s)", self.name, len(self.pairs),
                    cfg.trials, cfg.k, cfg.mode.value)

        start = time.perf_counter()
        results = self._run_trials()
        record.stage_times["trials"] = time.perf_counter() - start

        start = time.perf_counter()
        for trial, measurements in enumerate(results):
            for m in measurements:
                record.trial_rows.append(TrialRow(trial=trial, report=m.report))
        for index, pair in enumerate(self.pairs):
            column = [measurements[index] for measurements in results]
            report = average_reports([m.report for m in column])
            record.add_report(report)
            record.counts[pair.key] = PairCounts(
                clamps=sum(m.clamps for m in column),
                saturations=sum(m.saturations for m in column),
            )
            reference = self.reference_for(report)
            if reference:
                record.reference[pair.key] = reference
            if record.counts[pair.key].clamps:
                logger.info("%s: %d domain clamps", pair.key, record.counts[pair.key].clamps)
        record.stage_times["aggregate"] = time.perf_counter() - start

        logger.info("%s finished: %s", self.name,
                    ", ".join(f"{stage} {seconds:.3f}s" for stage, seconds in record.stage_times.items()))
        return record
