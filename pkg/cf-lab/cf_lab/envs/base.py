"""Base class for the goal-directed toy environments."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import ArgumentError, UsageError

GOAL_THRESHOLD = 0.025
DEFAULT_MAX_STEPS = 100


class EnvKind(str, Enum):
    """Supported environment kinds."""

    REACHER = "reacher"
    PUSHER = "pusher"


@dataclass(frozen=True)
class StepResult:
    """Outcome of one environment step."""

    next_state: np.ndarray
    reward: float
    done: bool
    success: bool


class GoalEnv(ABC):
    """A deterministic goal-directed MDP built from resolved physical parameters.

    Subclasses define the dynamics; this class owns the episode bookkeeping,
    the reward (negative distance of the achieved point to the goal) and the
    termination rule.
    """

    kind: EnvKind
    state_dim: int = 8
    action_dim: int

    def __init__(self, physical_params: np.ndarray, max_steps: int = DEFAULT_MAX_STEPS):
        if max_steps < 1:
            raise ArgumentError("max_steps must be positive")
        self.physical_params = np.asarray(physical_params, dtype=np.float64).copy()
        self.max_steps = int(max_steps)
        self.step_count = 0
        self.goal = np.zeros(2)
        self.done = False

    # -- dynamics hooks ----------------------------------------------------

    @abstractmethod
    def _reset_dynamics(self) -> None:
        """Put the dynamic state into the fixed initial configuration."""

    @abstractmethod
    def _apply_action(self, action: np.ndarray) -> None:
        """Advance the dynamic state by one step."""

    @abstractmethod
    def achieved_point(self) -> np.ndarray:
        """2-D point compared against the goal."""

    @abstractmethod
    def _dynamic_state(self) -> np.ndarray:
        """State vector without the goal (length state_dim - 2)."""

    @abstractmethod
    def goal_in_region(self, goal: np.ndarray) -> bool:
        """Whether a goal lies in the reachable region."""

    @abstractmethod
    def sample_goal(self, rng: np.random.Generator) -> np.ndarray:
        """Draw a goal uniformly from the reachable region."""

    # -- episode API -------------------------------------------------------

    @property
    def state(self) -> np.ndarray:
        return np.concatenate([self._dynamic_state(), self.goal])

    def reset(self, goal: Sequence[float]) -> np.ndarray:
        """Reset to the initial configuration with a new goal.

        Args:
            goal: 2-D goal in meters

        Returns:
            Initial state vector embedding the goal

        Raises:
            ArgumentError: If the goal is outside the reachable region
        """
        goal_array = np.asarray(goal, dtype=np.float64).reshape(-1)
        if goal_array.shape != (2,) or not np.all(np.isfinite(goal_array)):
            raise ArgumentError(f"goal must be a finite 2-D point, got {goal!r}")
        if not self.goal_in_region(goal_array):
            raise ArgumentError(
                f"goal {goal_array.tolist()} is outside the reachable region of {self.kind.value}"
            )
        self.goal = goal_array.copy()
        self.step_count = 0
        self.done = False
        self._reset_dynamics()
        return self.state

    def step(self, action: Sequence[float]) -> StepResult:
        """Apply one action.

        Args:
            action: Action vector, components clipped to [-1, 1]

        Returns:
            Step result

        Raises:
            UsageError: If the episode is over or the action has the wrong length
        """
        if self.done:
            raise UsageError("step called on a finished episode; call reset first")
        action_array = np.asarray(action, dtype=np.float64).reshape(-1)
        if action_array.size != self.action_dim:
            raise UsageError(
                f"{self.kind.value} expects actions of length {self.action_dim}, "
                f"got {action_array.size}"
            )
        self._apply_action(np.clip(action_array, -1.0, 1.0))
        self.step_count += 1

        distance = self.distance_to_goal()
        success = distance < GOAL_THRESHOLD
        self.done = success or self.step_count >= self.max_steps
        return StepResult(
            next_state=self.state, reward=-distance, done=self.done, success=success
        )

    def distance_to_goal(self) -> float:
        """Euclidean distance between the achieved point and the goal, in meters."""
        return float(np.linalg.norm(self.achieved_point() - self.goal))
