"""Pytest configuration and fixtures for cf-lab tests."""

from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest
from typer.testing import CliRunner

from cf_lab.config import RunConfig
from cf_lab.envs.reacher import LINK_LENGTH, REACH_RADIUS
from cf_lab.logging_config import setup_logging

# ---------------------------------------------------------------------------
# Micro-run settings: small networks and budgets so every regime trains in seconds
# ---------------------------------------------------------------------------

MICRO_RUN: Dict[str, Any] = {
    "env": "pusher",
    "seed": 0,
    "total_timesteps": 400,
    "eval_interval": 200,
    "max_episode_steps": 20,
    "loss_log_interval": 100,
    "ddpg": {
        "hidden_sizes": [16, 16],
        "batch_size": 16,
        "replay_capacity": 2000,
        "warmup_steps": 100,
    },
    "selfplay": {"stopping_hidden_sizes": [16]},
    "svpg": {"n_particles": 2},
    "discriminator": {"hidden_sizes": [16], "history": 8},
    "eval": {"episodes": 2},
}


def _merge(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Isolate every test from CF_* variables and keep logs quiet."""
    for name in ("CF_OUT", "CF_LOG_LEVEL", "CF_LOG_FORMAT"):
        monkeypatch.delenv(name, raising=False)
    setup_logging("WARNING")


@pytest.fixture
def micro_config(tmp_path: Path) -> Callable[..., RunConfig]:
    """Factory for small run configurations writing under tmp_path."""

    def build(algo: str = "ssadr", **updates: Any) -> RunConfig:
        data = _merge(MICRO_RUN, {"algo": algo, "output_root": str(tmp_path / "runs")})
        return RunConfig(**_merge(data, updates))

    return build


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def reacher_ik_policy() -> Callable[[float], Callable[[np.ndarray], np.ndarray]]:
    """Closed-form inverse-kinematics controller for a reacher with uniform joint gain.

    The arm is folded into two straight segments (joints 1 and 3 move, 2 and 4
    stay at zero), which reaches every point of the disk exactly.
    """

    def build(gain: float) -> Callable[[np.ndarray], np.ndarray]:
        segment = 2 * LINK_LENGTH

        def policy(observation: np.ndarray) -> np.ndarray:
            angles, goal = observation[:4], observation[-2:]
            radius = min(float(np.linalg.norm(goal)), REACH_RADIUS)
            cos_elbow = (radius**2 - 2 * segment**2) / (2 * segment**2)
            elbow = float(np.arccos(np.clip(cos_elbow, -1.0, 1.0)))
            shoulder = np.arctan2(goal[1], goal[0]) - np.arctan2(
                segment * np.sin(elbow), segment + segment * np.cos(elbow)
            )
            shoulder = float(np.arctan2(np.sin(shoulder), np.cos(shoulder)))
            target = np.array([shoulder, 0.0, elbow, 0.0])
            return np.clip((target - angles) / gain, -1.0, 1.0)

        return policy

    return build
