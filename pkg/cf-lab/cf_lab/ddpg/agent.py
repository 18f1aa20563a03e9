"""Deterministic actor-critic learner with target networks."""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
import structlog

from ..approx import Activation, AdamState, Approximator, adam_step
from ..errors import NumericError
from .replay import ReplayBuffer

logger = structlog.get_logger(__name__)


def policy_input(state: np.ndarray, goal: np.ndarray) -> np.ndarray:
    """Policy observation: the state with its embedded goal replaced by ``goal``.

    Works on single vectors and on row batches.
    """
    state = np.asarray(state, dtype=np.float64)
    goal = np.asarray(goal, dtype=np.float64)
    return np.concatenate([state[..., :-2], goal], axis=-1)


@dataclass(frozen=True)
class UpdateStats:
    critic_loss: float
    actor_objective: float


class DdpgAgent:
    """Actor, critic and their slowly tracking targets."""

    def __init__(
        self,
        obs_dim: int,
        action_dim: int,
        hidden_sizes: Sequence[int] = (400, 300),
        actor_lr: float = 1e-3,
        critic_lr: float = 1e-3,
        gamma: float = 0.99,
        tau: float = 0.005,
        exploration_noise: float = 0.1,
        rng: Optional[np.random.Generator] = None,
    ):
        """Initialize agent.

        Args:
            obs_dim: Length of the policy observation (state with goal slots)
            action_dim: Action length; actions live in [-1, 1]
            hidden_sizes: Hidden layer widths shared by actor and critic
            actor_lr: Actor learning rate
            critic_lr: Critic learning rate
            gamma: Discount factor
            tau: Soft target update rate in (0, 1]
            exploration_noise: Std of the Gaussian exploration noise
            rng: Generator for initialization and exploration noise
        """
        self.rng = rng if rng is not None else np.random.default_rng()
        self.obs_dim = int(obs_dim)
        self.action_dim = int(action_dim)
        self.gamma = float(gamma)
        self.tau = float(tau)
        self.exploration_noise = float(exploration_noise)

        hidden = list(hidden_sizes)
        self.actor = Approximator(
            [self.obs_dim, *hidden, self.action_dim], Activation.TANH, rng=self.rng
        )
        self.critic = Approximator(
            [self.obs_dim + self.action_dim, *hidden, 1], Activation.IDENTITY, rng=self.rng
        )
        self.target_actor = self.actor.copy()
        self.target_critic = self.critic.copy()
        self.actor_opt = AdamState(self.actor.n_params, learning_rate=actor_lr)
        self.critic_opt = AdamState(self.critic.n_params, learning_rate=critic_lr)
        self.updates = 0

    def act(self, state: np.ndarray, goal: np.ndarray, explore: bool = False) -> np.ndarray:
        """Action for a state and goal, optionally with Gaussian exploration noise."""
        action = self.actor.forward(policy_input(state, goal))
        if explore and self.exploration_noise > 0.0:
            action = action + self.rng.normal(0.0, self.exploration_noise, size=self.action_dim)
        return np.clip(action, -1.0, 1.0)

    def td_targets(
        self, rewards: np.ndarray, next_obs: np.ndarray, dones: np.ndarray
    ) -> np.ndarray:
        """r + gamma * (1 - done) * Q'(s', mu'(s')) from the target networks."""
        next_actions = self.target_actor.forward(next_obs)
        next_q = self.target_critic.forward(np.hstack([next_obs, next_actions]))[:, 0]
        return rewards + self.gamma * (1.0 - dones) * next_q

    def update(self, buffer: ReplayBuffer, batch_size: int) -> Optional[UpdateStats]:
        """One critic regression step, one actor ascent step, one soft target update.

        Returns:
            Losses, or None when the buffer holds fewer than batch_size transitions
        """
        if len(buffer) < batch_size:
            logger.debug("ddpg_update_skipped", buffer_size=len(buffer), batch_size=batch_size)
            return None

        batch = buffer.sample(batch_size, self.rng)
        obs = policy_input(batch["states"], batch["goals"])
        next_obs = policy_input(batch["next_states"], batch["goals"])

        targets = self.td_targets(batch["rewards"], next_obs, batch["dones"])

        critic_in = np.hstack([obs, batch["actions"]])
        errors = self.critic.forward(critic_in)[:, 0] - targets
        critic_loss = float(np.mean(errors**2))
        critic_grad = self.critic.gradient(critic_in, (2.0 / batch_size) * errors[:, None])
        adam_step(self.critic_opt, self.critic.params, critic_grad, name="critic")

        policy_actions = self.actor.forward(obs)
        actor_critic_in = np.hstack([obs, policy_actions])
        actor_objective = float(np.mean(self.critic.forward(actor_critic_in)))
        dq_da = self.critic.input_gradient(
            actor_critic_in, np.full((batch_size, 1), 1.0 / batch_size)
        )[:, self.obs_dim :]
        actor_grad = self.actor.gradient(obs, dq_da)
        adam_step(self.actor_opt, self.actor.params, -actor_grad, name="actor")

        self.soft_update()
        self.updates += 1
        self._assert_finite(critic_loss, actor_objective)
        return UpdateStats(critic_loss=critic_loss, actor_objective=actor_objective)

    def soft_update(self) -> None:
        for target, online in ((self.target_actor, self.actor), (self.target_critic, self.critic)):
            target.params *= 1.0 - self.tau
            target.params += self.tau * online.params

    def _assert_finite(self, critic_loss: float, actor_objective: float) -> None:
        checks = {
            "critic_loss": np.isfinite(critic_loss),
            "actor_objective": np.isfinite(actor_objective),
            "actor": np.all(np.isfinite(self.actor.params)),
            "critic": np.all(np.isfinite(self.critic.params)),
            "target_actor": np.all(np.isfinite(self.target_actor.params)),
            "target_critic": np.all(np.isfinite(self.target_critic.params)),
        }
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            raise NumericError(
                "ddpg update produced non-finite values",
                context={"component": "ddpg", "update": self.updates, "fields": ",".join(failed)},
            )

    def networks(self) -> Dict[str, Approximator]:
        return {
            "actor": self.actor,
            "critic": self.critic,
            "target_actor": self.target_actor,
            "target_critic": self.target_critic,
        }


def copy_weights(src: DdpgAgent) -> np.ndarray:
    """Detached copy of the online actor's parameters."""
    return src.actor.params.copy()
