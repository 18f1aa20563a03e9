"""Adaptive-moment optimizer state."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError, UsageError


@dataclass
class AdamState:
    """Bias-corrected Adam moments for one parameter vector."""

    n_params: int
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    first_moment: np.ndarray = field(init=False)
    second_moment: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise UsageError("learning rate must be positive")
        self.first_moment = np.zeros(self.n_params)
        self.second_moment = np.zeros(self.n_params)


def adam_step(
    state: AdamState, params: np.ndarray, grad: np.ndarray, name: str = "params"
) -> np.ndarray:
    """Apply one descent step to params in place.

    Args:
        state: Optimizer state, updated in place
        params: Parameter vector, updated in place
        grad: Gradient of the loss to minimize
        name: Label used in error context

    Returns:
        The updated parameter vector (same object as params)

    Raises:
        NumericError: If any gradient component is not finite
    """
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != params.shape or params.shape != (state.n_params,):
        raise UsageError(
            f"shape mismatch: params {params.shape}, grad {grad.shape}, state {state.n_params}"
        )
    if not np.all(np.isfinite(grad)):
        bad = int(np.flatnonzero(~np.isfinite(grad))[0])
        raise NumericError(
            "non-finite gradient component",
            context={"target": name, "index": bad, "step": state.step_count + 1},
        )

    state.step_count += 1
    state.first_moment *= state.beta1
    state.first_moment += (1.0 - state.beta1) * grad
    state.second_moment *= state.beta2
    state.second_moment += (1.0 - state.beta2) * grad**2

    m_hat = state.first_moment / (1.0 - state.beta1**state.step_count)
    v_hat = state.second_moment / (1.0 - state.beta2**state.step_count)
    params -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)
    return params
