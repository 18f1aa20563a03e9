"""Point agent pushing a puck across a unit square with randomized friction."""

import numpy as np

from .base import EnvKind, GoalEnv
from .space import PhysicalEnvParams, RandomizationSpace

WORKSPACE = (0.0, 1.0)
AGENT_START = (0.2, 0.5)
PUCK_START = (0.4, 0.5)
AGENT_SPEED = 0.05
PUSH_SPEED = 0.05
CONTACT_DISTANCE = 0.08

FRICTION_RANGE = (0.1, 0.9)
UNCALIBRATED_FRICTION_RANGE = (0.01, 0.9)
REFERENCE_FRICTION = 0.5
HARD_FRICTION = 0.05
# a released full-strength push slides into the wall at and below this friction
UNSOLVABLE_FRICTION = 0.05

CANONICAL_GOAL = (0.7, 0.5)


def pusher_space(calibrated: bool = True) -> RandomizationSpace:
    friction = FRICTION_RANGE if calibrated else UNCALIBRATED_FRICTION_RANGE
    return RandomizationSpace(
        lower=[friction[0]],
        upper=[friction[1]],
        reference=[REFERENCE_FRICTION],
        names=("friction",),
    )


def pusher_hard_params() -> PhysicalEnvParams:
    # icy surface
    return PhysicalEnvParams([HARD_FRICTION])


class PusherEnv(GoalEnv):
    """Agent moves by 0.05*a; contact imparts a pushing velocity decayed by friction.

    State: (agent x y, puck x y, puck velocity x y, goal x y).
    """

    kind = EnvKind.PUSHER
    action_dim = 2

    def __init__(self, physical_params: np.ndarray, max_steps: int = 100):
        super().__init__(physical_params, max_steps)
        self.friction = float(self.physical_params[0])
        self.agent = np.array(AGENT_START)
        self.puck = np.array(PUCK_START)
        self.puck_velocity = np.zeros(2)

    def _reset_dynamics(self) -> None:
        self.agent = np.array(AGENT_START)
        self.puck = np.array(PUCK_START)
        self.puck_velocity = np.zeros(2)

    def _apply_action(self, action: np.ndarray) -> None:
        low, high = WORKSPACE
        self.agent = np.clip(self.agent + AGENT_SPEED * action, low, high)

        offset = self.puck - self.agent
        gap = float(np.linalg.norm(offset))
        if gap < CONTACT_DISTANCE:
            # coincident centres push along the action itself
            normal = offset / gap if gap > 0.0 else action / max(np.linalg.norm(action), 1e-12)
            push = float(np.dot(PUSH_SPEED * action, normal))
            self.puck_velocity = max(push, 0.0) * normal

        self.puck = self.puck + self.puck_velocity
        for axis in range(2):
            if self.puck[axis] < low or self.puck[axis] > high:
                self.puck[axis] = min(max(self.puck[axis], low), high)
                self.puck_velocity[axis] = 0.0
        self.puck_velocity = self.puck_velocity * (1.0 - self.friction)

    def achieved_point(self) -> np.ndarray:
        return self.puck.copy()

    def _dynamic_state(self) -> np.ndarray:
        return np.concatenate([self.agent, self.puck, self.puck_velocity])

    def goal_in_region(self, goal: np.ndarray) -> bool:
        low, high = WORKSPACE
        return bool(np.all(goal >= low) and np.all(goal <= high))

    def sample_goal(self, rng: np.random.Generator) -> np.ndarray:
        low, high = WORKSPACE
        return rng.uniform(low, high, size=2)
