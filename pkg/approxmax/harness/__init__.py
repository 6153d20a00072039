"""
Seeded experiment harness: error tables and the Top-1 proxy.
"""

from .models import (
    DEFAULT_SEED,
    ExperimentConfig,
    PairCounts,
    RunRecord,
    SourceKind,
    SourceSpec,
    Target,
    TrialRow,
)
from .logits import generate_logits, parse_vector_text, read_vector_file, trial_generator
from .base_experiment import BaseExperiment
from .table_experiment import TableExperiment, run_table_experiment
from .topk_experiment import TopkExperiment, run_topk_proxy
from .reports import render_report_csv, render_summary_json, render_trials_csv, write_reports
from .reference_values import REFERENCE_ERRORS, TOP1_SCENARIOS, reference_errors, top1_delta

__all__ = [
    'DEFAULT_SEED',
    'ExperimentConfig',
    'PairCounts',
    'RunRecord',
    'SourceKind',
    'SourceSpec',
    'Target',
    'TrialRow',
    'generate_logits',
    'parse_vector_text',
    'read_vector_file',
    'trial_generator',
    'BaseExperiment',
    'TableExperiment',
    'run_table_experiment',
    'TopkExperiment',
    'run_topk_proxy',
    'render_report_csv',
    'render_summary_json',
    'render_trials_csv',
    'write_reports',
    'REFERENCE_ERRORS',
    'TOP1_SCENARIOS',
    'reference_errors',
    'top1_delta',
]
