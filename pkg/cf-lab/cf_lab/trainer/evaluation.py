"""Deterministic policy evaluation on fixed-seed goals."""

from enum import Enum
from typing import Callable, List, Literal, Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field

from ..ddpg import policy_input
from ..envs import (
    GOAL_THRESHOLD,
    AnyEnvParams,
    EnvKind,
    RandomizationSpace,
    hard_env_params,
    make_env,
)
from ..errors import ArgumentError

logger = structlog.get_logger(__name__)

Policy = Callable[[np.ndarray], np.ndarray]


class EvalEnv(str, Enum):
    """Which environment an evaluation ran on."""

    DEFAULT = "default"
    HARD = "hard"
    EXPLICIT = "explicit"


class EvalRecord(BaseModel):
    """Outcome of one evaluation; written to the metrics stream as an ``eval`` record."""

    kind: Literal["eval"] = "eval"
    timestep: int = Field(ge=0)
    scheduled_timestep: int = Field(ge=0)
    eval_env: EvalEnv
    mean_final_distance: float = Field(ge=0)
    distances: List[float]
    success_rate: float = Field(ge=0, le=1)
    n_episodes: int = Field(ge=1)
    seed: int
    algo: str


def evaluation_goals(
    kind: EnvKind, space: RandomizationSpace, n_episodes: int, eval_seed: int
) -> np.ndarray:
    """Goals drawn uniformly from the reachable region with a generator seeded by eval_seed."""
    rng = np.random.default_rng(eval_seed)
    env = make_env(space, space.reference_params(), kind)
    return np.stack([env.sample_goal(rng) for _ in range(n_episodes)])


def evaluate(
    policy: Policy,
    kind: EnvKind,
    space: RandomizationSpace,
    params: AnyEnvParams,
    n_episodes: int,
    eval_seed: int,
    max_steps: int = 100,
    eval_env: EvalEnv = EvalEnv.DEFAULT,
    timestep: int = 0,
    scheduled_timestep: Optional[int] = None,
    seed: int = 0,
    algo: str = "",
) -> EvalRecord:
    """Roll a deterministic policy on fixed-seed goals and record final distances.

    Args:
        policy: Maps the policy observation (state with goal slots) to an action
        kind: Environment kind
        space: Randomization space the parameters refer to
        params: Environment parameters (normalized or physical)
        n_episodes: Number of goals
        eval_seed: Seed of the goal generator
        max_steps: Episode step limit
        eval_env: Label of the evaluated environment
        timestep: Bob-steps consumed when the evaluation ran
        scheduled_timestep: Schedule point that triggered it
        seed: Run seed
        algo: Training regime

    Returns:
        Evaluation record
    """
    if n_episodes < 1:
        raise ArgumentError("n_episodes must be at least 1")
    goals = evaluation_goals(kind, space, n_episodes, eval_seed)
    distances = []
    for goal in goals:
        env = make_env(space, params, kind, max_steps=max_steps)
        state = env.reset(goal)
        while not env.done:
            action = np.asarray(policy(policy_input(state, goal)), dtype=np.float64)
            state = env.step(np.clip(action, -1.0, 1.0)).next_state
        distances.append(env.distance_to_goal())

    distances_array = np.asarray(distances)
    record = EvalRecord(
        timestep=timestep,
        scheduled_timestep=timestep if scheduled_timestep is None else scheduled_timestep,
        eval_env=eval_env,
        mean_final_distance=float(distances_array.mean()),
        distances=[float(value) for value in distances],
        success_rate=float(np.mean(distances_array < GOAL_THRESHOLD)),
        n_episodes=n_episodes,
        seed=seed,
        algo=algo,
    )
    logger.info(
        "evaluation_completed",
        timestep=timestep,
        eval_env=eval_env.value,
        mean_final_distance=record.mean_final_distance,
        success_rate=record.success_rate,
    )
    return record


def evaluate_run_point(
    policy: Policy,
    kind: EnvKind,
    space: RandomizationSpace,
    n_episodes: int,
    seed: int,
    seed_offset: int,
    max_steps: int,
    timestep: int,
    scheduled_timestep: int,
    algo: str,
    include_hard: bool = True,
) -> List[EvalRecord]:
    """Default-environment and hard-environment evaluations sharing one goal set."""
    eval_seed = seed + seed_offset
    targets = [(EvalEnv.DEFAULT, space.reference_params())]
    if include_hard:
        targets.append((EvalEnv.HARD, hard_env_params(kind)))
    return [
        evaluate(
            policy,
            kind,
            space,
            params,
            n_episodes,
            eval_seed,
            max_steps=max_steps,
            eval_env=label,
            timestep=timestep,
            scheduled_timestep=scheduled_timestep,
            seed=seed,
            algo=algo,
        )
        for label, params in targets
    ]


