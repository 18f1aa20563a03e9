"""Asymmetric self-play between a goal setter and a goal reacher."""

from .episode import (
    BobRewardMode,
    SelfPlayOutcome,
    run_alice,
    run_bob,
    run_selfplay_episode,
    update_stopping_policy,
)
from .rewards import alice_reward, bob_selfplay_reward
from .stopping import StoppingPolicy

__all__ = [
    "BobRewardMode",
    "SelfPlayOutcome",
    "StoppingPolicy",
    "alice_reward",
    "bob_selfplay_reward",
    "run_alice",
    "run_bob",
    "run_selfplay_episode",
    "update_stopping_policy",
]
