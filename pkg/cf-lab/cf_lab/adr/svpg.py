"""Stein variational update of the particle set.

Each particle moves along the kernel-weighted average of all particles'
return gradients plus a temperature-scaled repulsion term:

    phi_i <- phi_i + (eps / N) * sum_j [grad_j * k_ij + alpha * grad_phi_j k_ij]

with k_ij = k(phi_i, phi_j) and the RBF kernel k(a, b) = exp(-|a - b|^2 / h).
Each particle's step is then rescaled to at most ``max_step`` in norm.
"""

from enum import Enum
from typing import Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, Field

from ..errors import UsageError
from .particles import Particle

logger = structlog.get_logger(__name__)


class BandwidthMode(str, Enum):
    """How the kernel bandwidth is chosen."""

    MEDIAN = "median"
    FIXED = "fixed"


class SvpgConfig(BaseModel):
    """Particle ensemble settings."""

    n_particles: int = Field(default=10, ge=1)
    learning_rate: float = Field(default=0.01, gt=0)
    temperature: float = Field(default=0.1, ge=0)
    bandwidth_mode: BandwidthMode = BandwidthMode.MEDIAN
    bandwidth: float = Field(default=1.0, gt=0, description="Kernel bandwidth in fixed mode")
    proposal_scale: float = Field(default=0.05, gt=0)
    episodes_per_particle: int = Field(default=1, ge=1)
    max_step: Optional[float] = Field(
        default=0.05, gt=0, description="Per-particle step norm bound; unbounded when null"
    )
    normalize_advantages: bool = Field(
        default=True, description="Divide round advantages by their standard deviation"
    )


def kernel(a: np.ndarray, b: np.ndarray, bandwidth: float) -> float:
    """RBF kernel exp(-|a - b|^2 / h)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise UsageError(f"kernel arguments differ in shape: {a.shape} vs {b.shape}")
    if not bandwidth > 0.0:
        raise UsageError(f"kernel bandwidth must be positive, got {bandwidth}")
    return float(np.exp(-np.sum((a - b) ** 2) / bandwidth))


def kernel_gradient(a: np.ndarray, b: np.ndarray, bandwidth: float) -> np.ndarray:
    """Gradient of k(a, b) with respect to its second argument."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return (2.0 / bandwidth) * (a - b) * kernel(a, b, bandwidth)


def median_bandwidth(locations: np.ndarray) -> float:
    """Median heuristic h = med^2 / log(N + 1) over pairwise particle distances.

    Falls back to 1.0 for a single particle or when all particles coincide.
    """
    locations = np.asarray(locations, dtype=np.float64)
    n_particles = locations.shape[0]
    if n_particles < 2:
        return 1.0
    rows, cols = np.triu_indices(n_particles, k=1)
    distances = np.linalg.norm(locations[rows] - locations[cols], axis=1)
    median = float(np.median(distances))
    if median <= 0.0:
        logger.warning("median_bandwidth_degenerate", n_particles=n_particles, fallback=1.0)
        return 1.0
    return median**2 / np.log(n_particles + 1)


def resolve_bandwidth(locations: np.ndarray, cfg: SvpgConfig) -> float:
    if cfg.bandwidth_mode is BandwidthMode.FIXED:
        return float(cfg.bandwidth)
    return median_bandwidth(locations)


def svpg_direction(
    locations: np.ndarray, grads: np.ndarray, cfg: SvpgConfig, bandwidth: Optional[float] = None
) -> np.ndarray:
    """Unclipped per-particle step (eps / N) * sum_j [...] for every particle."""
    locations = np.asarray(locations, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if locations.ndim != 2 or grads.shape != locations.shape:
        raise UsageError(
            f"locations {locations.shape} and gradients {grads.shape} "
            "must be matching (N, d) arrays"
        )
    h = resolve_bandwidth(locations, cfg) if bandwidth is None else float(bandwidth)
    n_particles = locations.shape[0]

    # diffs[i, j] = phi_i - phi_j
    diffs = locations[:, None, :] - locations[None, :, :]
    weights = np.exp(-np.sum(diffs**2, axis=-1) / h)
    driving = weights @ grads
    repulsive = (2.0 / h) * np.einsum("ij,ijd->id", weights, diffs)
    return (cfg.learning_rate / n_particles) * (driving + cfg.temperature * repulsive)


def bound_steps(steps: np.ndarray, max_step: Optional[float]) -> np.ndarray:
    """Rescale every row whose norm exceeds max_step; direction is kept."""
    steps = np.asarray(steps, dtype=np.float64)
    if max_step is None:
        return steps
    norms = np.linalg.norm(steps, axis=1, keepdims=True)
    factors = np.minimum(1.0, max_step / np.maximum(norms, np.finfo(np.float64).tiny))
    return steps * factors


def svpg_update(
    particles: Sequence[Particle],
    grads: Sequence[np.ndarray],
    cfg: SvpgConfig,
    bandwidth: Optional[float] = None,
) -> np.ndarray:
    """Move every particle by one bounded interacting update and clip to the unit box.

    Args:
        particles: The particle set; locations are updated in place
        grads: One return-gradient estimate per particle
        cfg: Ensemble settings
        bandwidth: Kernel bandwidth override

    Returns:
        New locations, shape (N, d)
    """
    if len(particles) != len(grads):
        raise UsageError(f"{len(particles)} particles but {len(grads)} gradients")
    locations = np.stack([particle.location for particle in particles])
    direction = svpg_direction(locations, np.stack(grads), cfg, bandwidth)
    step = bound_steps(direction, cfg.max_step)
    updated = np.clip(locations + step, 0.0, 1.0)
    for particle, location in zip(particles, updated):
        particle.move_to(location)
    logger.debug(
        "svpg_update_applied",
        n_particles=len(particles),
        mean_step=float(np.abs(step).mean()),
        bounded=int(np.sum(np.any(step != direction, axis=1))),
        returns=[particle.running_return for particle in particles],
    )
    return updated
