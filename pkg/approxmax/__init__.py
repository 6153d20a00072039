"""
approxmax: bit-accurate model of approximate softmax accelerators.

Fixed-point arithmetic, Taylor and LUT exponential kernels, the softmax
pipeline, error metrics and a seeded experiment harness.
"""

__version__ = "1.0.0"
