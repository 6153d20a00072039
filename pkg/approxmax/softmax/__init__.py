"""Softmax pipelines: exact oracle, fixed-point accelerator model, prescaling."""
from .engine import (
    LogitsVector,
    RealSoftmaxResult,
    SoftmaxResult,
    StabilizerConfig,
    default_output_format,
    prescale,
    softmax_approx,
    softmax_approx_real,
    softmax_exact,
)
from .fc_layer import fc_layer_reference, stabilizing_scale

__all__ = [
    'LogitsVector',
    'RealSoftmaxResult',
    'SoftmaxResult',
    'StabilizerConfig',
    'default_output_format',
    'prescale',
    'softmax_approx',
    'softmax_approx_real',
    'softmax_exact',
    'fc_layer_reference',
    'stabilizing_scale',
]
