"""Simulator factory: maps parameter points to environment instances."""

from typing import Dict, Type

import numpy as np

from ..errors import ConfigurationError
from .base import DEFAULT_MAX_STEPS, EnvKind, GoalEnv
from .pusher import CANONICAL_GOAL as PUSHER_GOAL
from .pusher import PusherEnv, pusher_hard_params, pusher_space
from .reacher import CANONICAL_GOAL as REACHER_GOAL
from .reacher import ReacherEnv, reacher_hard_params, reacher_space
from .space import AnyEnvParams, PhysicalEnvParams, RandomizationSpace

ENV_CLASSES: Dict[EnvKind, Type[GoalEnv]] = {
    EnvKind.REACHER: ReacherEnv,
    EnvKind.PUSHER: PusherEnv,
}


def make_space(kind: EnvKind, calibrated: bool = True) -> RandomizationSpace:
    """Randomization space for an environment kind."""
    kind = EnvKind(kind)
    if kind is EnvKind.REACHER:
        return reacher_space(calibrated)
    return pusher_space(calibrated)


def make_env(
    space: RandomizationSpace,
    params: AnyEnvParams,
    kind: EnvKind,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> GoalEnv:
    """Build a freshly reset environment instance.

    Args:
        space: Randomization space the parameters refer to
        params: Normalized parameters, or physical ones for out-of-box instances
        kind: Environment kind
        max_steps: Episode step limit

    Returns:
        Environment reset to its canonical goal

    Raises:
        ConfigurationError: If the parameter dimension does not match the space or kind
    """
    kind = EnvKind(kind)
    env_class = ENV_CLASSES[kind]
    expected = make_space(kind).n_dims
    if space.n_dims != expected:
        raise ConfigurationError(
            f"{kind.value} expects a {expected}-dimensional space, got {space.n_dims}"
        )
    physical = params.resolve(space)
    env = env_class(physical, max_steps=max_steps)
    env.reset(canonical_goal(kind))
    return env


def hard_env_params(kind: EnvKind) -> PhysicalEnvParams:
    """Parameters of the intuitively hard evaluation environment, in physical units."""
    kind = EnvKind(kind)
    if kind is EnvKind.REACHER:
        return reacher_hard_params()
    return pusher_hard_params()


def canonical_goal(kind: EnvKind) -> np.ndarray:
    kind = EnvKind(kind)
    return np.array(REACHER_GOAL if kind is EnvKind.REACHER else PUSHER_GOAL)
