"""Goal-directed toy environments and their randomization spaces."""

from .base import DEFAULT_MAX_STEPS, GOAL_THRESHOLD, EnvKind, GoalEnv, StepResult
from .factory import canonical_goal, hard_env_params, make_env, make_space
from .pusher import PusherEnv
from .reacher import ReacherEnv
from .space import AnyEnvParams, EnvParams, PhysicalEnvParams, RandomizationSpace

__all__ = [
    "DEFAULT_MAX_STEPS",
    "GOAL_THRESHOLD",
    "AnyEnvParams",
    "EnvKind",
    "EnvParams",
    "GoalEnv",
    "PhysicalEnvParams",
    "PusherEnv",
    "RandomizationSpace",
    "ReacherEnv",
    "StepResult",
    "canonical_goal",
    "hard_env_params",
    "make_env",
    "make_space",
]
