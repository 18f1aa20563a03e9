"""Off-policy actor-critic learner."""

from .agent import DdpgAgent, UpdateStats, copy_weights, policy_input
from .replay import ReplayBuffer, Transition

__all__ = ["DdpgAgent", "ReplayBuffer", "Transition", "UpdateStats", "copy_weights", "policy_input"]
