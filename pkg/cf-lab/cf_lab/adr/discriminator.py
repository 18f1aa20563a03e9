"""Trajectory discriminator: reference rollouts versus randomized-instance rollouts."""

from typing import Optional, Sequence

import numpy as np
import structlog

from ..approx import Activation, AdamState, Approximator, adam_step
from ..ddpg import Transition
from ..errors import ArgumentError, NumericError

logger = structlog.get_logger(__name__)

FEATURE_STEPS = 10
_PROB_FLOOR = 1e-12


def feature_length(state_dim: int, action_dim: int, n_steps: int = FEATURE_STEPS) -> int:
    return n_steps * (state_dim + action_dim)


def featurize_trajectory(
    transitions: Sequence[Transition], n_steps: int = FEATURE_STEPS
) -> np.ndarray:
    """Fixed-length (state, action) summary of a trajectory.

    Trajectories of at least ``n_steps`` steps are subsampled at evenly spaced
    indices; shorter ones fill the leading slots and are zero-padded.
    """
    if not transitions:
        raise ArgumentError("cannot featurize an empty trajectory")
    rows = np.stack(
        [np.concatenate([transition.state, transition.action]) for transition in transitions]
    )
    if len(rows) >= n_steps:
        indices = np.linspace(0, len(rows) - 1, n_steps).round().astype(int)
        slots = rows[indices]
    else:
        slots = np.zeros((n_steps, rows.shape[1]))
        slots[: len(rows)] = rows
    return slots.reshape(-1)


class Discriminator:
    """Binary classifier D(y=1 | trajectory).

    The output is the probability that a rollout came from a randomized instance.
    """

    def __init__(
        self,
        feature_dim: int,
        hidden_sizes: Sequence[int] = (64, 64),
        learning_rate: float = 1e-3,
        rng: Optional[np.random.Generator] = None,
    ):
        self.feature_dim = int(feature_dim)
        self.net = Approximator([self.feature_dim, *hidden_sizes, 1], Activation.SIGMOID, rng=rng)
        self.opt = AdamState(self.net.n_params, learning_rate=learning_rate)
        self.updates = 0

    def probability(self, features: np.ndarray) -> np.ndarray:
        """D output for one feature vector (scalar array) or a batch."""
        output = self.net.forward(features)
        return output[..., 0]

    @staticmethod
    def _batch(ref_feats: np.ndarray, rand_feats: np.ndarray):
        ref_feats = np.atleast_2d(np.asarray(ref_feats, dtype=np.float64))
        rand_feats = np.atleast_2d(np.asarray(rand_feats, dtype=np.float64))
        if len(ref_feats) == 0 or len(rand_feats) == 0:
            raise ArgumentError("discriminator batches must both be non-empty")
        inputs = np.vstack([ref_feats, rand_feats])
        labels = np.concatenate([np.zeros(len(ref_feats)), np.ones(len(rand_feats))])
        return inputs, labels

    def loss(self, ref_feats: np.ndarray, rand_feats: np.ndarray) -> float:
        """Mean binary cross-entropy with rand labelled 1 and ref labelled 0."""
        inputs, labels = self._batch(ref_feats, rand_feats)
        p = np.clip(self.net.forward(inputs)[:, 0], _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        return float(-np.mean(labels * np.log(p) + (1.0 - labels) * np.log1p(-p)))

    def loss_gradient(self, ref_feats: np.ndarray, rand_feats: np.ndarray) -> np.ndarray:
        inputs, labels = self._batch(ref_feats, rand_feats)
        p = np.clip(self.net.forward(inputs)[:, 0], _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        upstream = (p - labels) / (p * (1.0 - p) * len(labels))
        return self.net.gradient(inputs, upstream[:, None])

    def accuracy(self, ref_feats: np.ndarray, rand_feats: np.ndarray) -> float:
        inputs, labels = self._batch(ref_feats, rand_feats)
        predictions = (self.net.forward(inputs)[:, 0] >= 0.5).astype(np.float64)
        return float(np.mean(predictions == labels))


def train_discriminator(
    discriminator: Discriminator, ref_feats: np.ndarray, rand_feats: np.ndarray
) -> float:
    """One cross-entropy descent step.

    Returns:
        Loss before the step
    """
    loss = discriminator.loss(ref_feats, rand_feats)
    if not np.isfinite(loss):
        raise NumericError(
            "discriminator loss is not finite",
            context={"component": "discriminator", "update": discriminator.updates},
        )
    grad = discriminator.loss_gradient(ref_feats, rand_feats)
    adam_step(discriminator.opt, discriminator.net.params, grad, name="discriminator")
    discriminator.updates += 1
    return loss


def discriminator_reward(discriminator: Discriminator, features: np.ndarray) -> float:
    """log D(y=1 | trajectory); never positive."""
    probability = float(discriminator.probability(np.asarray(features, dtype=np.float64)))
    return float(np.log(max(probability, np.finfo(np.float64).tiny)))
