"""Environment curriculum: SVPG particles and the discriminator reward."""

from .discriminator import (
    FEATURE_STEPS,
    Discriminator,
    discriminator_reward,
    feature_length,
    featurize_trajectory,
    train_discriminator,
)
from .particles import (
    Particle,
    ParticleSample,
    advantage_scale,
    estimate_grad_J,
    init_particles,
    sample_params,
)
from .svpg import (
    BandwidthMode,
    SvpgConfig,
    bound_steps,
    kernel,
    kernel_gradient,
    median_bandwidth,
    svpg_direction,
    svpg_update,
)

__all__ = [
    "FEATURE_STEPS",
    "BandwidthMode",
    "Discriminator",
    "Particle",
    "ParticleSample",
    "SvpgConfig",
    "advantage_scale",
    "bound_steps",
    "discriminator_reward",
    "estimate_grad_J",
    "feature_length",
    "featurize_trajectory",
    "init_particles",
    "kernel",
    "kernel_gradient",
    "median_bandwidth",
    "sample_params",
    "svpg_direction",
    "svpg_update",
    "train_discriminator",
]
