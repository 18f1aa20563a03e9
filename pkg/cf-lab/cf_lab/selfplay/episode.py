"""One asymmetric self-play episode: Alice sets a goal, Bob chases it."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
import structlog

from ..approx import Approximator
from ..ddpg import DdpgAgent, ReplayBuffer, Transition, policy_input
from ..envs import GOAL_THRESHOLD, GoalEnv
from ..errors import NumericError
from .rewards import alice_reward, bob_selfplay_reward
from .stopping import StoppingPolicy

logger = structlog.get_logger(__name__)


class BobRewardMode(str, Enum):
    """Per-step reward stored in Bob's replay."""

    ENV = "env"
    SELFPLAY = "selfplay"


@dataclass
class SelfPlayOutcome:
    """Everything one episode produces for the two curricula and for Bob's replay."""

    t_a: int
    t_b: int
    target: np.ndarray
    alice_reward: float
    bob_reward: float
    bob_success: bool
    bob_final_distance: float
    stop_log_probs: List[float] = field(default_factory=list)
    stop_inputs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    stop_decisions: np.ndarray = field(default_factory=lambda: np.zeros(0))
    bob_transitions: List[Transition] = field(default_factory=list)

    @property
    def alice_actions(self) -> int:
        return self.t_a - 1


def run_alice(
    alice_actor: Approximator,
    stopping_policy: StoppingPolicy,
    env_ref: GoalEnv,
    intent: np.ndarray,
    rng: np.random.Generator,
    noise: float = 0.0,
):
    """Alice acts in the reference environment until she signals STOP.

    A STOP decision is taken before every action. STOP is forced once t_a
    reaches the step limit or the reference episode ends; forced stops carry
    no log-probability.

    Returns:
        (t_a, target point, stop inputs, stop decisions, stop log-probabilities)
    """
    state = env_ref.reset(intent)
    initial_state = state.copy()
    inputs, decisions, log_probs = [], [], []
    t_a = 0
    while True:
        t_a += 1
        if t_a >= env_ref.max_steps or env_ref.done:
            break
        stop, log_prob, features = stopping_policy.decide(initial_state, state, rng)
        inputs.append(features)
        decisions.append(1.0 if stop else 0.0)
        log_probs.append(log_prob)
        if stop:
            break
        action = alice_actor.forward(policy_input(state, intent))
        if noise > 0.0:
            action = action + rng.normal(0.0, noise, size=action.shape)
        state = env_ref.step(np.clip(action, -1.0, 1.0)).next_state

    stop_inputs = np.asarray(inputs) if inputs else np.zeros((0, 2 * state.size))
    return t_a, env_ref.achieved_point(), stop_inputs, np.asarray(decisions), log_probs


def run_bob(
    bob_agent: DdpgAgent,
    env_rand: GoalEnv,
    target: np.ndarray,
    rng: np.random.Generator,
    explore: bool = True,
    random_actions: bool = False,
    reward_mode: BobRewardMode = BobRewardMode.ENV,
    reward_scale: float = 0.2,
) -> List[Transition]:
    """Bob chases the target until success or the step limit."""
    state = env_rand.reset(target)
    transitions: List[Transition] = []
    while not env_rand.done:
        if random_actions:
            action = rng.uniform(-1.0, 1.0, size=env_rand.action_dim)
        else:
            action = bob_agent.act(state, target, explore=explore)
        result = env_rand.step(action)
        reward = result.reward if reward_mode is BobRewardMode.ENV else -reward_scale
        transitions.append(
            Transition(
                state=state,
                action=np.asarray(action, dtype=np.float64),
                reward=float(reward),
                next_state=result.next_state,
                done=1.0 if result.success else 0.0,
                goal=np.asarray(target, dtype=np.float64).copy(),
            )
        )
        state = result.next_state
    return transitions


def run_selfplay_episode(
    alice_actor: Approximator,
    stopping_policy: StoppingPolicy,
    bob_agent: DdpgAgent,
    env_ref: GoalEnv,
    env_rand: GoalEnv,
    rng: np.random.Generator,
    reward_scale: float = 0.2,
    intent: Optional[np.ndarray] = None,
    alice_noise: float = 0.0,
    bob_explore: bool = True,
    bob_random_actions: bool = False,
    bob_reward_mode: BobRewardMode = BobRewardMode.ENV,
    replay: Optional[ReplayBuffer] = None,
) -> SelfPlayOutcome:
    """Run Alice in E_ref, then Bob in E_rand toward Alice's final achieved point.

    Args:
        alice_actor: Alice's acting policy (a delayed copy of Bob's actor)
        stopping_policy: Alice's STOP policy
        bob_agent: Bob's learner
        env_ref: Environment built from the reference parameters
        env_rand: Environment built from a sampled parameter point
        rng: Episode generator (intent goal, STOP sampling, Alice noise, warmup actions)
        reward_scale: upsilon
        intent: Goal Alice's actor is conditioned on; drawn from the goal region if omitted
        alice_noise: Std of Alice's exploration noise
        bob_explore: Whether Bob adds exploration noise
        bob_random_actions: Uniform random actions for Bob (replay warmup)
        bob_reward_mode: Reward stored in Bob's transitions
        replay: Bob's replay buffer; transitions are appended when given

    Returns:
        Episode outcome
    """
    if intent is None:
        intent = env_ref.sample_goal(rng)
    t_a, target, stop_inputs, stop_decisions, stop_log_probs = run_alice(
        alice_actor,
        stopping_policy,
        env_ref,
        np.asarray(intent, dtype=np.float64),
        rng,
        alice_noise,
    )

    transitions = run_bob(
        bob_agent,
        env_rand,
        target,
        rng,
        explore=bob_explore,
        random_actions=bob_random_actions,
        reward_mode=bob_reward_mode,
        reward_scale=reward_scale,
    )
    t_b = len(transitions)
    success = env_rand.distance_to_goal() < GOAL_THRESHOLD
    if replay is not None:
        for transition in transitions:
            replay.add(transition)

    r_a = alice_reward(t_a, t_b, reward_scale)
    r_b = bob_selfplay_reward(t_b, reward_scale)
    if r_a < 0.0 or r_b > 0.0 or not (np.isfinite(r_a) and np.isfinite(r_b)):
        raise NumericError(
            "self-play reward out of range",
            context={"r_a": r_a, "r_b": r_b, "t_a": t_a, "t_b": t_b},
        )

    return SelfPlayOutcome(
        t_a=t_a,
        t_b=t_b,
        target=target,
        alice_reward=r_a,
        bob_reward=r_b,
        bob_success=bool(success),
        bob_final_distance=env_rand.distance_to_goal(),
        stop_log_probs=stop_log_probs,
        stop_inputs=stop_inputs,
        stop_decisions=stop_decisions,
        bob_transitions=transitions,
    )


def update_stopping_policy(stopping_policy: StoppingPolicy, outcome: SelfPlayOutcome) -> float:
    """Vanilla policy-gradient step on Alice's STOP decisions with reward r_a."""
    return stopping_policy.update(
        outcome.stop_inputs, outcome.stop_decisions, outcome.stop_log_probs, outcome.alice_reward
    )
