"""FIFO experience replay."""

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..errors import UsageError


@dataclass(frozen=True)
class Transition:
    """One environment step, goal included."""

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: float
    goal: np.ndarray


class ReplayBuffer:
    """Ring buffer over preallocated arrays; when full the oldest entry is overwritten."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int, goal_dim: int = 2):
        if capacity < 1:
            raise UsageError("replay capacity must be positive")
        self.capacity = int(capacity)
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros((capacity, action_dim))
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.dones = np.zeros(capacity)
        self.goals = np.zeros((capacity, goal_dim))
        self.cursor = 0
        self.size = 0
        self.total_added = 0

    def __len__(self) -> int:
        return self.size

    def add(self, transition: Transition) -> None:
        index = self.cursor
        self.states[index] = transition.state
        self.actions[index] = transition.action
        self.rewards[index] = transition.reward
        self.next_states[index] = transition.next_state
        self.dones[index] = transition.done
        self.goals[index] = transition.goal
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)
        self.total_added += 1

    def sample(self, batch_size: int, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        if batch_size > self.size:
            raise UsageError(f"cannot sample {batch_size} from a buffer of {self.size}")
        indices = rng.integers(0, self.size, size=batch_size)
        return {
            "states": self.states[indices],
            "actions": self.actions[indices],
            "rewards": self.rewards[indices],
            "next_states": self.next_states[indices],
            "dones": self.dones[indices],
            "goals": self.goals[indices],
        }

    def ordered(self) -> List[Transition]:
        """Stored transitions from oldest to newest."""
        start = self.cursor if self.size == self.capacity else 0
        order = [(start + offset) % self.capacity for offset in range(self.size)]
        return [
            Transition(
                state=self.states[i].copy(),
                action=self.actions[i].copy(),
                reward=float(self.rewards[i]),
                next_state=self.next_states[i].copy(),
                done=float(self.dones[i]),
                goal=self.goals[i].copy(),
            )
            for i in order
        ]
