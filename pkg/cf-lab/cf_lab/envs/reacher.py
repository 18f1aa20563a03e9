"""Planar four-link reacher with randomized joint gains and dampings."""

import numpy as np

from .base import EnvKind, GoalEnv
from .space import PhysicalEnvParams, RandomizationSpace

N_LINKS = 4
LINK_LENGTH = 0.1
REACH_RADIUS = N_LINKS * LINK_LENGTH

GAIN_RANGE = (0.005, 0.05)
DAMPING_RANGE = (0.0, 0.05)
UNCALIBRATED_GAIN_RANGE = (0.001, 0.05)
UNCALIBRATED_DAMPING_RANGE = (0.0, 0.1)
REFERENCE_GAIN = 0.03
REFERENCE_DAMPING = 0.01

CANONICAL_GOAL = (0.25, 0.15)


def forward_kinematics(joint_angles: np.ndarray) -> np.ndarray:
    """End-effector position of the arm; joint angles are relative to the previous link."""
    absolute = np.cumsum(joint_angles)
    return LINK_LENGTH * np.array([np.cos(absolute).sum(), np.sin(absolute).sum()])


def reacher_space(calibrated: bool = True) -> RandomizationSpace:
    """Randomization box over 4 joint gains (rad/step) followed by 4 dampings (1/step)."""
    gains = GAIN_RANGE if calibrated else UNCALIBRATED_GAIN_RANGE
    dampings = DAMPING_RANGE if calibrated else UNCALIBRATED_DAMPING_RANGE
    return RandomizationSpace(
        lower=[gains[0]] * N_LINKS + [dampings[0]] * N_LINKS,
        upper=[gains[1]] * N_LINKS + [dampings[1]] * N_LINKS,
        reference=[REFERENCE_GAIN] * N_LINKS + [REFERENCE_DAMPING] * N_LINKS,
        names=tuple(f"gain_{j}" for j in range(N_LINKS))
        + tuple(f"damping_{j}" for j in range(N_LINKS)),
    )


def reacher_hard_params() -> PhysicalEnvParams:
    # low-torque arm: gains well under the training floor, dampings at the ceiling
    return PhysicalEnvParams([0.6 * GAIN_RANGE[0]] * N_LINKS + [DAMPING_RANGE[1]] * N_LINKS)


class ReacherEnv(GoalEnv):
    """Kinematic arm: theta_j += gain_j * a_j - damping_j * theta_j.

    State: (4 joint angles, end-effector x y, goal x y).
    """

    kind = EnvKind.REACHER
    action_dim = N_LINKS

    def __init__(self, physical_params: np.ndarray, max_steps: int = 100):
        super().__init__(physical_params, max_steps)
        self.gains = self.physical_params[:N_LINKS]
        self.dampings = self.physical_params[N_LINKS:]
        self.joint_angles = np.zeros(N_LINKS)

    def _reset_dynamics(self) -> None:
        self.joint_angles = np.zeros(N_LINKS)

    def _apply_action(self, action: np.ndarray) -> None:
        self.joint_angles = (
            self.joint_angles + self.gains * action - self.dampings * self.joint_angles
        )

    def achieved_point(self) -> np.ndarray:
        return forward_kinematics(self.joint_angles)

    def _dynamic_state(self) -> np.ndarray:
        return np.concatenate([self.joint_angles, self.achieved_point()])

    def goal_in_region(self, goal: np.ndarray) -> bool:
        return bool(np.linalg.norm(goal) <= REACH_RADIUS + 1e-12)

    def sample_goal(self, rng: np.random.Generator) -> np.ndarray:
        radius = REACH_RADIUS * np.sqrt(rng.random())
        angle = rng.uniform(-np.pi, np.pi)
        return np.array([radius * np.cos(angle), radius * np.sin(angle)])
