"""Central finite-difference checks for analytic gradients."""

from typing import Callable, Optional

import numpy as np


def numerical_gradient(
    objective: Callable[[np.ndarray], float],
    params: np.ndarray,
    indices: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Central differences of a scalar objective at selected coordinates.

    The parameter vector is perturbed in place and restored afterwards.
    """
    estimates = np.empty(len(indices))
    for position, index in enumerate(indices):
        original = params[index]
        params[index] = original + h
        plus = objective(params)
        params[index] = original - h
        minus = objective(params)
        params[index] = original
        estimates[position] = (plus - minus) / (2.0 * h)
    return estimates


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> np.ndarray:
    denominator = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return np.abs(analytic - numeric) / denominator


def check_gradient(
    objective: Callable[[np.ndarray], float],
    analytic: np.ndarray,
    params: np.ndarray,
    n_coords: int = 64,
    h: float = 1e-5,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Worst relative error between an analytic gradient and central differences.

    Args:
        objective: Scalar function of the (flat) parameter vector
        analytic: Analytic gradient at params
        params: Parameter vector the objective reads
        n_coords: Number of random coordinates to probe
        h: Finite-difference step
        rng: Generator choosing the coordinates

    Returns:
        Maximum relative error over the probed coordinates
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    count = min(n_coords, params.size)
    indices = rng.choice(params.size, size=count, replace=False)
    numeric = numerical_gradient(objective, params, indices, h)
    return float(relative_error(analytic[indices], numeric).max())
