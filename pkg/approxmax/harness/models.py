"""
Experiment configuration and result models.

Defines Pydantic models for experiment configs (validated from JSON files
or CLI flags) and the run records experiments produce.
"""
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union
import json

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..config.paths import PathManager
from ..core.fixed_point import FixedFormat, parse_format
from ..kernels.spec import ExpKernelSpec
from ..metrics.errors import ErrorReport, MeasurementMode
from ..utils.exceptions import ConfigurationError

DEFAULT_SEED = 42
MAX_SEED = (1 << 64) - 1
_NAME_CHECK_FORMAT = FixedFormat(16, 15)


class SourceKind(str, Enum):
    UNIFORM = "uniform"
    FILE = "file"
    FC_LAYER = "fc-layer"


class Target(str, Enum):
    """What the metrics compare: softmax vectors, or the per-element exponentials."""
    SOFTMAX = "softmax"
    EXPONENTIAL = "exponential"


class SourceSpec(BaseModel):
    """Where logits come from."""
    model_config = ConfigDict(extra="forbid")

    kind: SourceKind = SourceKind.UNIFORM
    span: float = Field(default=1.0, gt=0)
    path: Optional[str] = None
    inputs: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _file_needs_path(self) -> 'SourceSpec':
        if self.kind is SourceKind.FILE and not self.path:
            raise ValueError("file source needs a path")
        return self


def _format_text(value: str) -> str:
    try:
        return str(parse_format(value))
    except ConfigurationError as e:
        raise ValueError(str(e)) from e


class ExperimentConfig(BaseModel):
    """
    Experiment configuration.

    Every kernel is run on every format; each (kernel, format) pair yields
    exactly one aggregated report.
    """
    model_config = ConfigDict(extra="forbid")

    kernels: List[str] = Field(..., min_length=1)
    formats: List[str] = Field(default_factory=lambda: ["q16.15"], min_length=1)
    k: int = Field(default=1000, ge=1)
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0, le=MAX_SEED)
    mode: MeasurementMode = MeasurementMode.METHOD_ERROR
    source: SourceSpec = Field(default_factory=SourceSpec)
    kernel_format: Optional[str] = None
    output_format: Optional[str] = None
    prescale_shift: int = Field(default=0, ge=0)
    target: Target = Target.SOFTMAX
    distinct: bool = False

    @field_validator("kernels")
    @classmethod
    def _check_kernels(cls, kernels: List[str]) -> List[str]:
        names = []
        for text in kernels:
            try:
                names.append(ExpKernelSpec.parse(text, _NAME_CHECK_FORMAT).name)
            except ConfigurationError as e:
                raise ValueError(str(e)) from e
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate kernels in {kernels}")
        return names

    @field_validator("formats")
    @classmethod
    def _check_formats(cls, formats: List[str]) -> List[str]:
        parsed = [_format_text(f) for f in formats]
        if len(set(parsed)) != len(parsed):
            raise ValueError(f"duplicate formats in {formats}")
        return parsed

    @field_validator("kernel_format", "output_format")
    @classmethod
    def _check_optional_format(cls, value: Optional[str]) -> Optional[str]:
        return None if value is None else _format_text(value)

    @model_validator(mode="after")
    def _check_shift(self) -> 'ExperimentConfig':
        narrowest = min(parse_format(f).total_bits for f in self.formats)
        if self.prescale_shift >= narrowest:
            raise ValueError(f"prescale_shift {self.prescale_shift} must be below {narrowest} bits")
        return self

    @property
    def parsed_formats(self) -> List[FixedFormat]:
        return [parse_format(f) for f in self.formats]

    @property
    def parsed_kernel_format(self) -> Optional[FixedFormat]:
        return parse_format(self.kernel_format) if self.kernel_format else None

    @property
    def parsed_output_format(self) -> Optional[FixedFormat]:
        return parse_format(self.output_format) if self.output_format else None

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentConfig':
        """
        Validate a config mapping.

        Raises:
            ConfigurationError: If validation fails
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigurationError(f"invalid experiment config: {e}") from e

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        """
        Load a JSON config file.

        Raises:
            ArtifactIOError: If the file cannot be read
            ConfigurationError: If it is not valid JSON or fails validation
        """
        text = PathManager.read_text(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: invalid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)


class PairCounts(BaseModel):
    """Domain clamps and saturated exponentials of one (kernel, format) pair."""
    clamps: int = 0
    saturations: int = 0


class TrialRow(BaseModel):
    """Report of one trial for one (kernel, format) pair."""
    trial: int
    report: ErrorReport


class RunRecord(BaseModel):
    """
    Result of one experiment run.

    Records are append-only: reports and artifacts are only ever added.
    Stage wall times stay in memory and never reach serialized artifacts.
    """
    experiment: str
    config: ExperimentConfig
    reports: List[ErrorReport] = Field(default_factory=list)
    trial_rows: List[TrialRow] = Field(default_factory=list)
    counts: Dict[str, PairCounts] = Field(default_factory=dict)
    reference: Dict[str, Dict[str, float]] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)
    stage_times: Dict[str, float] = Field(default_factory=dict, exclude=True)

    def add_report(self, report: ErrorReport) -> None:
        self.reports.append(report)

    def add_artifact(self, path: Union[str, Path]) -> None:
        self.artifacts.append(str(path))

    def report_for(self, method: str, config: str) -> ErrorReport:
        for report in self.reports:
            if report.method == method and report.config == config:
                return report
        raise KeyError(f"no report for {method}@{config}")
