"""Alice's STOP-signalling policy, trained by vanilla policy gradient."""

from typing import Optional, Sequence, Tuple

import numpy as np
import structlog

from ..approx import Activation, AdamState, Approximator, adam_step
from ..errors import NumericError

logger = structlog.get_logger(__name__)

_PROB_FLOOR = 1e-12


class StoppingPolicy:
    """Bernoulli STOP decision on (initial state, current state).

    The reward baseline is a running mean of Alice's reward.
    """

    def __init__(
        self,
        state_dim: int,
        hidden_sizes: Sequence[int] = (300, 300),
        learning_rate: float = 1e-3,
        baseline_rate: float = 0.01,
        rng: Optional[np.random.Generator] = None,
    ):
        self.net = Approximator(
            [2 * state_dim, *hidden_sizes, 1], Activation.SIGMOID, rng=rng
        )
        self.opt = AdamState(self.net.n_params, learning_rate=learning_rate)
        self.baseline = 0.0
        self.baseline_rate = float(baseline_rate)

    @staticmethod
    def features(initial_state: np.ndarray, current_state: np.ndarray) -> np.ndarray:
        return np.concatenate([initial_state, current_state])

    def stop_probability(self, initial_state: np.ndarray, current_state: np.ndarray) -> float:
        return float(self.net.forward(self.features(initial_state, current_state))[0])

    def decide(
        self, initial_state: np.ndarray, current_state: np.ndarray, rng: np.random.Generator
    ) -> Tuple[bool, float, np.ndarray]:
        """Sample STOP or CONTINUE.

        Returns:
            (stop, log-probability of the sampled decision, policy input)
        """
        features = self.features(initial_state, current_state)
        probability = float(self.net.forward(features)[0])
        stop = bool(rng.random() < probability)
        with np.errstate(divide="ignore"):
            log_prob = float(np.log(probability if stop else 1.0 - probability))
        return stop, log_prob, features

    def surrogate(self, inputs: np.ndarray, decisions: np.ndarray, advantage: float) -> float:
        """sum_t log pi(decision_t | input_t) * advantage."""
        probabilities = np.clip(self.net.forward(inputs)[:, 0], _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        log_probs = decisions * np.log(probabilities) + (1.0 - decisions) * np.log1p(-probabilities)
        return float(advantage * log_probs.sum())

    def surrogate_gradient(
        self, inputs: np.ndarray, decisions: np.ndarray, advantage: float
    ) -> np.ndarray:
        probabilities = np.clip(self.net.forward(inputs)[:, 0], _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        upstream = advantage * (
            decisions / probabilities - (1.0 - decisions) / (1.0 - probabilities)
        )
        return self.net.gradient(inputs, upstream[:, None])

    def update(
        self,
        inputs: np.ndarray,
        decisions: np.ndarray,
        log_probs: Sequence[float],
        reward: float,
    ) -> float:
        """One ascent step on the centred surrogate, then refresh the baseline.

        Returns:
            Surrogate loss (negated objective) before the step
        """
        log_probs = np.asarray(log_probs, dtype=np.float64)
        if not np.all(np.isfinite(log_probs)):
            raise NumericError(
                "non-finite stop log-probability",
                context={"component": "stopping_policy", "decisions": len(log_probs)},
            )
        advantage = reward - self.baseline
        loss = 0.0
        if len(decisions) > 0:
            inputs = np.asarray(inputs, dtype=np.float64)
            decisions = np.asarray(decisions, dtype=np.float64)
            loss = -self.surrogate(inputs, decisions, advantage)
            grad = self.surrogate_gradient(inputs, decisions, advantage)
            adam_step(self.opt, self.net.params, -grad, name="stopping_policy")
        self.baseline += self.baseline_rate * (reward - self.baseline)
        if not np.isfinite(self.baseline):
            raise NumericError("stopping baseline diverged", context={"reward": reward})
        return loss
