"""
Real-valued fully connected layer with input prescaling.

y_i = w_i · (x / n) + b_i / n keeps every output inside ]-1, 1[ when all
operands lie in ]-1, 1[ and n > k, which is what lets the exponential
kernels work on a constrained domain.
"""
import numpy as np

from ..utils.exceptions import DomainError


def stabilizing_scale(k: int) -> int:
    """Power-of-two scale 2^ceil(log2(k + 1)) for a k-input layer."""
    if k < 1:
        raise DomainError(f"layer needs at least one input, got {k}")
    return 1 << k.bit_length()


def _check_open_unit(name: str, values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)) or np.any(np.abs(values) >= 1.0):
        raise DomainError(f"{name} entries must lie in ]-1, 1[")


def fc_layer_reference(W, x, b, n: float) -> np.ndarray:
    """
    Prescaled fully connected layer in float64.

    Args:
        W: Weights, shape (outputs, k)
        x: Inputs, shape (k,)
        b: Biases, shape (outputs,)
        n: Scale, at least k

    Returns:
        Layer outputs, shape (outputs,)

    Raises:
        DomainError: If an operand leaves ]-1, 1[, shapes disagree or n < k
    """
    W = np.atleast_2d(np.asarray(W, dtype=np.float64))
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if W.shape != (b.size, x.size):
        raise DomainError(f"weights of shape {W.shape} do not match {b.size} outputs and {x.size} inputs")
    if n < x.size:
        raise DomainError(f"scale {n} is below the input length {x.size}")
    for name, values in (("W", W), ("x", x), ("b", b)):
        _check_open_unit(name, values)
    return W @ (x / n) + b / n
