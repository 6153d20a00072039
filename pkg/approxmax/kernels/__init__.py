"""
Exponential kernels: exact reference, Taylor series and LUT interpolation.
"""

from .spec import (
    DEFAULT_DOMAIN,
    ExpKernelSpec,
    KernelMethod,
    LutDegree,
    TaylorScheme,
    default_working_format,
)
from .base_kernel import BaseExpKernel
from .exact_kernel import ExactKernel, eval_exact_exp
from .taylor_kernel import TaylorKernel, eval_taylor_exp, taylor_constants
from .lut import (
    LutKernel,
    LutTable,
    SegmentIndexMap,
    build_lut,
    eval_lut_exp,
    locate_segment,
    lut_lookup,
    segment_index,
)
from .lut_io import LUT_FORMATS, export_lut, parse_lut
from .factory import KernelFactory, create_kernel, get_kernel_factory

__all__ = [
    'DEFAULT_DOMAIN',
    'ExpKernelSpec',
    'KernelMethod',
    'LutDegree',
    'TaylorScheme',
    'default_working_format',
    'BaseExpKernel',
    'ExactKernel',
    'eval_exact_exp',
    'TaylorKernel',
    'eval_taylor_exp',
    'taylor_constants',
    'LutKernel',
    'LutTable',
    'SegmentIndexMap',
    'build_lut',
    'eval_lut_exp',
    'segment_index',
    'locate_segment',
    'lut_lookup',
    'LUT_FORMATS',
    'export_lut',
    'parse_lut',
    'KernelFactory',
    'create_kernel',
    'get_kernel_factory',
]
