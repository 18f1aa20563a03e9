"""SVPG particles: clipped Gaussian proposals over the normalized randomization box."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..envs import EnvParams
from ..errors import ArgumentError

logger = structlog.get_logger(__name__)


@dataclass
class Particle:
    """One sampling distribution mu_phi over [0, 1]^N_rand.

    Attributes:
        location: Trainable centre phi, kept inside the unit box
        sigma: Fixed proposal scale
        running_return: Mean reward of the particle's episodes in the last round
    """

    location: np.ndarray
    sigma: float = 0.05
    running_return: float = 0.0

    def __post_init__(self):
        self.location = np.clip(np.asarray(self.location, dtype=np.float64).copy(), 0.0, 1.0)
        if self.location.ndim != 1 or self.location.size == 0:
            raise ArgumentError("particle location must be a non-empty vector")
        if not self.sigma > 0.0:
            raise ArgumentError(f"proposal scale must be positive, got {self.sigma}")

    @property
    def n_dims(self) -> int:
        return self.location.size

    def move_to(self, location: np.ndarray) -> None:
        self.location = np.clip(np.asarray(location, dtype=np.float64), 0.0, 1.0)


@dataclass(frozen=True)
class ParticleSample:
    """A proposal drawn from a particle, with its pre-clip score."""

    params: EnvParams
    raw: np.ndarray
    score: np.ndarray


def init_particles(
    n_particles: int, n_dims: int, sigma: float, rng: np.random.Generator
) -> List[Particle]:
    """Particles at uniformly random locations in the unit box."""
    if n_particles < 1:
        raise ArgumentError("at least one particle is required")
    return [Particle(rng.uniform(0.0, 1.0, size=n_dims), sigma=sigma) for _ in range(n_particles)]


def sample_params(particle: Particle, rng: np.random.Generator) -> ParticleSample:
    """Draw xi = clip(phi + sigma * z, 0, 1).

    The score grad_phi log N(raw; phi, sigma^2 I) = z / sigma is taken before clipping.
    """
    z = rng.standard_normal(particle.n_dims)
    raw = particle.location + particle.sigma * z
    return ParticleSample(params=EnvParams(raw), raw=raw, score=z / particle.sigma)


def advantage_scale(rewards: Sequence[float]) -> float:
    """Standard deviation of a reward round, or 1.0 when the round is constant."""
    spread = float(np.std(np.asarray(rewards, dtype=np.float64)))
    return spread if spread > 1e-12 else 1.0


def estimate_grad_J(
    particle: Particle,
    episodes: Sequence[Tuple[EnvParams, np.ndarray, float]],
    baseline: Optional[float] = None,
    scale: float = 1.0,
) -> np.ndarray:
    """Score-function estimate of grad_phi J from (params, score, reward) episodes.

    Args:
        particle: Particle the episodes were drawn from
        episodes: Episodes of this particle
        baseline: Reward baseline; the batch-mean reward when omitted
        scale: Advantages are divided by this positive value

    Returns:
        mean((r - b) / scale * score); a zero vector when the batch is empty
    """
    if not scale > 0.0:
        raise ArgumentError(f"advantage scale must be positive, got {scale}")
    if not episodes:
        logger.warning("particle_gradient_skipped", reason="empty_batch", n_dims=particle.n_dims)
        return np.zeros(particle.n_dims)
    rewards = np.array([reward for _, _, reward in episodes], dtype=np.float64)
    scores = np.stack([np.asarray(score, dtype=np.float64) for _, score, _ in episodes])
    reference = float(rewards.mean()) if baseline is None else float(baseline)
    particle.running_return = float(rewards.mean())
    advantages = (rewards - reference) / scale
    return (advantages[:, None] * scores).mean(axis=0)
