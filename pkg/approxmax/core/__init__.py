"""Fixed-point numerical substrate."""
from .fixed_point import (
    MAX_TOTAL_BITS,
    MIN_TOTAL_BITS,
    FixedFormat,
    FixedValue,
    dequantize,
    fx_add,
    fx_convert,
    fx_mul,
    fx_mul_into,
    fx_shift_right,
    parse_format,
    quantize,
    required_int_bits,
    round_div,
    round_shift,
)

__all__ = [
    'MAX_TOTAL_BITS',
    'MIN_TOTAL_BITS',
    'FixedFormat',
    'FixedValue',
    'dequantize',
    'fx_add',
    'fx_convert',
    'fx_mul',
    'fx_mul_into',
    'fx_shift_right',
    'parse_format',
    'quantize',
    'required_int_bits',
    'round_div',
    'round_shift',
]
