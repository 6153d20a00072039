"""
Published figures of the modeled accelerators, shipped as context data.

Error figures were measured on one 1000-element vector in ]-1, 1[ with a
16-bit format; LUT rows use 64 samples. Top-1 figures come from full model
inference (10-way classifier: 12-bit logits with 6 integer bits and a 3-bit
prescale; 1000-way classifier: 20-bit logits with 10 integer bits and a 1-bit
prescale) and are kept as deltas relative to the exact design.
"""
from typing import Dict, Optional

REFERENCE_ERRORS: Dict[str, Dict[str, float]] = {
    "taylor1": {"rmse": 3.13e-3, "variance": 2.48e-6, "stddev": 1.57e-3},
    "taylor2": {"rmse": 2.97e-3, "variance": 2.45e-6, "stddev": 1.56e-3},
    "taylor3": {"rmse": 4.18e-5, "variance": 6.84e-10, "stddev": 2.62e-5},
    "lut-linear-64": {"rmse": 3.22e-6, "variance": 4.28e-12, "stddev": 2.07e-6},
    "lut-quadratic-64": {"rmse": 2.31e-7, "variance": 2.60e-14, "stddev": 1.61e-7},
}

_TOP1_ACCURACY: Dict[int, Dict[str, float]] = {
    10: {
        "exact": 0.9768,
        "lut-linear-32": 0.9763,
        "lut-linear-16": 0.9763,
        "lut-linear-8": 0.9765,
        "taylor3": 0.9763,
        "taylor2": 0.9752,
        "taylor1": 0.9751,
    },
    1000: {
        "exact": 0.748,
        "lut-linear-64": 0.74,
        "lut-linear-32": 0.688,
        "lut-linear-16": 0.556,
        "taylor3": 0.872,
        "taylor2": 0.872,
        "taylor1": 0.0,
    },
}

TOP1_SCENARIOS = {
    10: {"format": "q12.6", "prescale_shift": 3},
    1000: {"format": "q20.10", "prescale_shift": 1},
}


def _base_name(method: str) -> str:
    return method[:-len("-horner")] if method.endswith("-horner") else method


def reference_errors(method: str) -> Optional[Dict[str, float]]:
    """Published error figures for a kernel, if any."""
    return REFERENCE_ERRORS.get(_base_name(method))


def top1_delta(k: int, method: str) -> Optional[float]:
    """Published Top-1 accuracy of a kernel minus that of the exact design."""
    scenario = _TOP1_ACCURACY.get(k)
    if scenario is None:
        return None
    accuracy = scenario.get(_base_name(method))
    if accuracy is None:
        return None
    return round(accuracy - scenario["exact"], 6)


def top1_accuracy(k: int, method: str) -> Optional[float]:
    scenario = _TOP1_ACCURACY.get(k, {})
    return scenario.get(_base_name(method))
