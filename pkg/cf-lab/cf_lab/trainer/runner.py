"""Training loops for the four regimes.

Every regime spends its budget in Bob-steps (environment steps taken by the
goal reacher). Each Bob rollout's step limit is capped by the remaining
budget, so the run ends exactly at ``total_timesteps``. Evaluations fire
whenever the Bob-step counter crosses a multiple of ``eval_interval``.
"""

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Deque, Dict, List, Optional, Tuple

import numpy as np
import structlog
import yaml

from ..adr import (
    Discriminator,
    Particle,
    advantage_scale,
    discriminator_reward,
    estimate_grad_J,
    feature_length,
    featurize_trajectory,
    init_particles,
    sample_params,
    svpg_update,
    train_discriminator,
)
from ..approx import Approximator, save_bundle
from ..config import AlgoName, ConfigManager, RunConfig, UdrGoalMode
from ..ddpg import DdpgAgent, ReplayBuffer, Transition, UpdateStats
from ..envs import (
    EnvParams,
    GoalEnv,
    canonical_goal,
    hard_env_params,
    make_env,
    make_space,
)
from ..errors import NumericError
from ..metrics import MetricsWriter
from ..selfplay import (
    SelfPlayOutcome,
    StoppingPolicy,
    bob_selfplay_reward,
    run_bob,
    run_selfplay_episode,
    update_stopping_policy,
)
from .evaluation import EvalRecord, evaluate_run_point
from .schedule import EvalSchedule
from .seeding import make_streams

logger = structlog.get_logger(__name__)

METRICS_FILE = "metrics.jsonl"
RESOLVED_CONFIG_FILE = "config.resolved"


@dataclass
class RunSummary:
    """What a finished run reports."""

    run_dir: Path
    algo: str
    bob_steps: int
    alice_steps: int
    episodes: int
    evaluations: List[EvalRecord] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)

    def final_distance(self, eval_env: str) -> Optional[float]:
        matching = [record for record in self.evaluations if record.eval_env.value == eval_env]
        return matching[-1].mean_final_distance if matching else None


class TrainingRun:
    """One seeded training run of a regime, writing its artifacts to ``run_dir``."""

    def __init__(self, cfg: RunConfig, run_dir: Optional[Path] = None):
        """Initialize run.

        Args:
            cfg: Validated run configuration
            run_dir: Output directory; ``cfg.run_dir`` when omitted
        """
        self.cfg = cfg
        self.run_dir = Path(run_dir) if run_dir is not None else cfg.run_dir
        self.kind = cfg.env
        self.space = make_space(self.kind, calibrated=cfg.calibrated)
        self.reference = self.space.reference_params()
        self.streams = make_streams(cfg.seed)
        self.schedule = EvalSchedule(cfg.total_timesteps, cfg.eval_interval)
        self.logger = logger.bind(algo=cfg.algo.value, env=self.kind.value, seed=cfg.seed)

        probe = make_env(self.space, self.reference, self.kind, cfg.max_episode_steps)
        self.state_dim = probe.state_dim
        self.action_dim = probe.action_dim

        ddpg = cfg.ddpg
        self.agent = DdpgAgent(
            obs_dim=self.state_dim,
            action_dim=self.action_dim,
            hidden_sizes=ddpg.hidden_sizes,
            actor_lr=ddpg.actor_lr,
            critic_lr=ddpg.critic_lr,
            gamma=ddpg.gamma,
            tau=ddpg.tau,
            exploration_noise=ddpg.exploration_noise,
            rng=self.streams.agent,
        )
        self.replay = ReplayBuffer(ddpg.replay_capacity, self.state_dim, self.action_dim)

        self.stopping: Optional[StoppingPolicy] = None
        self.alice_actor: Optional[Approximator] = None
        if cfg.algo in (AlgoName.SSADR, AlgoName.UNSUP_DEFAULT):
            self.stopping = StoppingPolicy(
                self.state_dim,
                hidden_sizes=cfg.selfplay.stopping_hidden_sizes,
                learning_rate=cfg.selfplay.stopping_lr,
                baseline_rate=cfg.selfplay.baseline_rate,
                rng=self.streams.networks,
            )
            self.alice_actor = self.agent.actor.copy()

        self.particles: List[Particle] = []
        if cfg.algo in (AlgoName.SSADR, AlgoName.ADR_DISC):
            self.particles = init_particles(
                cfg.svpg.n_particles,
                self.space.n_dims,
                cfg.svpg.proposal_scale,
                self.streams.particles,
            )
        self._round: List[List[Tuple[EnvParams, np.ndarray, float]]] = [
            [] for _ in self.particles
        ]

        self.discriminator: Optional[Discriminator] = None
        self._ref_features: Deque[np.ndarray] = deque(maxlen=cfg.discriminator.history)
        self._rand_features: Deque[np.ndarray] = deque(maxlen=cfg.discriminator.history)
        if cfg.algo is AlgoName.ADR_DISC:
            self.discriminator = Discriminator(
                feature_length(self.state_dim, self.action_dim),
                hidden_sizes=cfg.discriminator.hidden_sizes,
                learning_rate=cfg.discriminator.learning_rate,
                rng=self.streams.networks,
            )

        self.bob_steps = 0
        self.alice_steps = 0
        self.episodes = 0
        self.evaluations: List[EvalRecord] = []
        self.counters: Dict[str, int] = {
            "ddpg_updates": 0,
            "ddpg_updates_skipped": 0,
            "svpg_updates": 0,
            "reference_rollouts_skipped": 0,
            "curriculum_updates_skipped": 0,
        }
        self._latest_losses: Dict[str, float] = {}
        self.metrics: Optional[MetricsWriter] = None

    # -- budget --------------------------------------------------------------

    @property
    def remaining(self) -> int:
        return self.cfg.total_timesteps - self.bob_steps

    def _episode_limit(self) -> int:
        return min(self.cfg.max_episode_steps, self.remaining)

    def _truncated(self) -> bool:
        """Whether the next Bob rollout is cut short by the remaining budget."""
        return self.remaining < self.cfg.max_episode_steps

    def _in_warmup(self) -> bool:
        return self.bob_steps < self.cfg.ddpg.warmup_steps

    # -- artifacts -----------------------------------------------------------

    def _header(self) -> Dict[str, Any]:
        return {
            "algo": self.cfg.algo.value,
            "env": self.kind.value,
            "seed": self.cfg.seed,
            "range_mode": self.cfg.range_mode.value,
            "total_timesteps": self.cfg.total_timesteps,
            "eval_interval": self.cfg.eval_interval,
            "space": self.space.to_dict(),
        }

    def networks(self) -> Dict[str, Approximator]:
        networks = dict(self.agent.networks())
        if self.alice_actor is not None:
            networks["alice_actor"] = self.alice_actor
        if self.stopping is not None:
            networks["stopping_policy"] = self.stopping.net
        if self.discriminator is not None:
            networks["discriminator"] = self.discriminator.net
        return networks

    def checkpoint_metadata(self) -> Dict[str, Any]:
        return {
            "algo": self.cfg.algo.value,
            "env": self.kind.value,
            "range_mode": self.cfg.range_mode.value,
            "seed": self.cfg.seed,
            "timestep": self.bob_steps,
            "alice_steps": self.alice_steps,
            "max_episode_steps": self.cfg.max_episode_steps,
            "particles": [particle.location.tolist() for particle in self.particles],
            "particle_returns": [particle.running_return for particle in self.particles],
        }

    def save_checkpoint(self, name: str) -> Path:
        return save_bundle(
            self.run_dir / "checkpoints" / name, self.networks(), self.checkpoint_metadata()
        )

    def _write_diagnostic(self, error: NumericError) -> Path:
        manifest = self.save_checkpoint("diagnostic")
        diagnostic = {
            "error": str(error),
            "context": {key: str(value) for key, value in error.context.items()},
            "timestep": self.bob_steps,
            "episodes": self.episodes,
        }
        path = manifest.parent / "diagnostic.yaml"
        with open(path, "w", encoding="utf-8") as handle:
            yaml.safe_dump(diagnostic, handle, sort_keys=True)
        return path

    # -- entry point -----------------------------------------------------------

    def run(self) -> RunSummary:
        """Train until the Bob-step budget is spent.

        Raises:
            NumericError: After writing a diagnostic checkpoint
        """
        self.run_dir.mkdir(parents=True, exist_ok=True)
        ConfigManager.save_resolved(self.cfg, self.run_dir / RESOLVED_CONFIG_FILE)
        self._check_hard_params()

        loop = {
            AlgoName.SSADR: self._ssadr_episode,
            AlgoName.UNSUP_DEFAULT: self._unsup_default_episode,
            AlgoName.UDR: self._udr_episode,
            AlgoName.ADR_DISC: self._adr_disc_episode,
        }[self.cfg.algo]

        self.logger.info(
            "run_started",
            run_dir=str(self.run_dir),
            total_timesteps=self.cfg.total_timesteps,
            planned_evaluations=self.schedule.n_evaluations,
        )
        with MetricsWriter(self.run_dir / METRICS_FILE, self._header()) as metrics:
            self.metrics = metrics
            try:
                while self.remaining > 0:
                    previous = self.bob_steps
                    loop()
                    self.episodes += 1
                    self._after_bob_steps(previous)
            except NumericError as e:
                path = self._write_diagnostic(e)
                self.logger.error(
                    "run_aborted", error=str(e), timestep=self.bob_steps, diagnostic=str(path)
                )
                raise
            finally:
                self.metrics = None

        self.save_checkpoint("final")
        self.logger.info(
            "run_completed",
            bob_steps=self.bob_steps,
            alice_steps=self.alice_steps,
            episodes=self.episodes,
            **self.counters,
        )
        return RunSummary(
            run_dir=self.run_dir,
            algo=self.cfg.algo.value,
            bob_steps=self.bob_steps,
            alice_steps=self.alice_steps,
            episodes=self.episodes,
            evaluations=list(self.evaluations),
            counters=dict(self.counters),
        )

    def _check_hard_params(self) -> None:
        hard = hard_env_params(self.kind).values
        if self.space.contains(hard):
            self.logger.warning(
                "hard_env_inside_training_box",
                hard_params=hard.tolist(),
                range_mode=self.cfg.range_mode.value,
            )

    # -- shared steps ----------------------------------------------------------

    def _write(self, record: Dict[str, Any]) -> None:
        if self.metrics is not None:
            self.metrics.write(record)

    def _consume(self, transitions: List[Transition]) -> None:
        """Account Bob's steps, store them and run one DDPG update per post-warmup step."""
        for transition in transitions:
            self.replay.add(transition)
        start = self.bob_steps
        self.bob_steps += len(transitions)
        for step in range(start + 1, self.bob_steps + 1):
            if step <= self.cfg.ddpg.warmup_steps:
                continue
            stats = self.agent.update(self.replay, self.cfg.ddpg.batch_size)
            self._record_update(stats)

    def _record_update(self, stats: Optional[UpdateStats]) -> None:
        if stats is None:
            self.counters["ddpg_updates_skipped"] += 1
            return
        self.counters["ddpg_updates"] += 1
        self._latest_losses["critic"] = stats.critic_loss
        self._latest_losses["actor"] = stats.actor_objective

    def _after_bob_steps(self, previous: int) -> None:
        interval = self.cfg.loss_log_interval
        if self.bob_steps // interval > previous // interval:
            for component in sorted(self._latest_losses):
                self._write(
                    {
                        "kind": "loss",
                        "timestep": self.bob_steps,
                        "component": component,
                        "value": self._latest_losses[component],
                    }
                )
        for scheduled in self.schedule.crossed(previous, self.bob_steps):
            self._evaluate(scheduled)

    def _evaluate(self, scheduled: int) -> None:
        records = evaluate_run_point(
            self.agent.actor,
            self.kind,
            self.space,
            n_episodes=self.cfg.eval.episodes,
            seed=self.cfg.seed,
            seed_offset=self.cfg.eval.seed_offset,
            max_steps=self.cfg.max_episode_steps,
            timestep=self.bob_steps,
            scheduled_timestep=scheduled,
            algo=self.cfg.algo.value,
            include_hard=self.cfg.eval.hard,
        )
        for record in records:
            self.evaluations.append(record)
            self._write(record.model_dump(mode="json"))

    def _check_rewards(self, r_a: float, r_b: float) -> None:
        if r_a < 0.0 or r_b > 0.0:
            raise NumericError(
                "self-play reward sign violated",
                context={"r_a": r_a, "r_b": r_b, "timestep": self.bob_steps},
            )

    def _write_sample(self, particle: Optional[int], params: EnvParams) -> None:
        self._write(
            {
                "kind": "sample",
                "timestep": self.bob_steps,
                "particle": particle,
                "xi": params.values,
                "xi_physical": params.resolve(self.space),
            }
        )

    def _next_particle(self) -> int:
        return self.episodes % len(self.particles)

    def _add_particle_episode(
        self, index: int, params: EnvParams, score: np.ndarray, reward: float
    ) -> None:
        """Collect one episode for a particle; update the ensemble once the round is complete."""
        self._round[index].append((params, score, reward))
        round_size = len(self.particles) * self.cfg.svpg.episodes_per_particle
        if sum(len(episodes) for episodes in self._round) < round_size:
            return
        rewards = [reward for episodes in self._round for _, _, reward in episodes]
        baseline = float(np.mean(rewards))
        scale = advantage_scale(rewards) if self.cfg.svpg.normalize_advantages else 1.0
        grads = [
            estimate_grad_J(particle, episodes, baseline=baseline, scale=scale)
            for particle, episodes in zip(self.particles, self._round)
        ]
        svpg_update(self.particles, grads, self.cfg.svpg)
        self.counters["svpg_updates"] += 1
        self._round = [[] for _ in self.particles]

    # -- self-play regimes -----------------------------------------------------

    def _skip_curriculum(self, truncated: bool) -> bool:
        """Count and report an episode whose Bob limit was cut by the budget."""
        if truncated:
            self.counters["curriculum_updates_skipped"] += 1
            self.logger.debug(
                "curriculum_update_skipped", reason="budget_truncated", timestep=self.bob_steps
            )
        return truncated

    def _selfplay(self, env_rand: GoalEnv, truncated: bool = False) -> SelfPlayOutcome:
        # Alice acts with Bob's actor as it was before this iteration's updates
        self.alice_actor.params[:] = self.agent.actor.params
        env_ref = make_env(self.space, self.reference, self.kind, self.cfg.max_episode_steps)
        alice_noise = self.cfg.ddpg.exploration_noise if self.cfg.selfplay.alice_explore else 0.0
        outcome = run_selfplay_episode(
            self.alice_actor,
            self.stopping,
            self.agent,
            env_ref,
            env_rand,
            rng=self.streams.episodes,
            reward_scale=self.cfg.selfplay.reward_scale,
            alice_noise=alice_noise,
            bob_explore=True,
            bob_random_actions=self._in_warmup(),
            bob_reward_mode=self.cfg.selfplay.bob_reward,
        )
        # r_a of a budget-cut episode is never learned from
        if not self._skip_curriculum(truncated):
            self._latest_losses["stopping_policy"] = update_stopping_policy(self.stopping, outcome)
        self.alice_steps += outcome.alice_actions
        self._consume(outcome.bob_transitions)
        return outcome

    def _write_selfplay(self, outcome: SelfPlayOutcome, particle: Optional[int]) -> None:
        self._write(
            {
                "kind": "selfplay",
                "timestep": self.bob_steps,
                "t_a": outcome.t_a,
                "t_b": outcome.t_b,
                "r_a": outcome.alice_reward,
                "r_b": outcome.bob_reward,
                "bob_success": outcome.bob_success,
                "particle": particle,
            }
        )

    def _ssadr_episode(self) -> None:
        index = self._next_particle()
        particle = self.particles[index]
        sample = sample_params(particle, self.streams.environments)
        self._write_sample(index, sample.params)
        truncated = self._truncated()
        env_rand = make_env(self.space, sample.params, self.kind, self._episode_limit())
        outcome = self._selfplay(env_rand, truncated)
        self._write_selfplay(outcome, index)
        if not truncated:
            self._add_particle_episode(index, sample.params, sample.score, outcome.alice_reward)

    def _unsup_default_episode(self) -> None:
        truncated = self._truncated()
        env_rand = make_env(self.space, self.reference, self.kind, self._episode_limit())
        outcome = self._selfplay(env_rand, truncated)
        self._write_selfplay(outcome, None)

    # -- non-self-play regimes ---------------------------------------------------

    def _rollout(self, params: EnvParams, goal: np.ndarray) -> List[Transition]:
        env = make_env(self.space, params, self.kind, self._episode_limit())
        return run_bob(
            self.agent,
            env,
            goal,
            self.streams.episodes,
            explore=True,
            random_actions=self._in_warmup(),
            reward_mode=self.cfg.selfplay.bob_reward,
            reward_scale=self.cfg.selfplay.reward_scale,
        )

    def _write_episode(
        self, transitions: List[Transition], particle: Optional[int], reward: Optional[float]
    ) -> None:
        r_b = bob_selfplay_reward(len(transitions), self.cfg.selfplay.reward_scale)
        self._check_rewards(0.0, r_b)
        record = {
            "kind": "episode",
            "timestep": self.bob_steps,
            "t_b": len(transitions),
            "r_b": r_b,
            "bob_success": bool(transitions[-1].done),
            "particle": particle,
        }
        if reward is not None:
            record["r_d"] = reward
        self._write(record)

    def _udr_episode(self) -> None:
        params = self.space.sample_uniform(self.streams.environments)
        if self.cfg.udr_goal_mode is UdrGoalMode.FIXED:
            goal = canonical_goal(self.kind)
        else:
            probe = make_env(self.space, params, self.kind)
            goal = probe.sample_goal(self.streams.environments)
        self._write_sample(None, params)
        transitions = self._rollout(params, goal)
        self._consume(transitions)
        self._write_episode(transitions, None, None)

    def _adr_disc_episode(self) -> None:
        index = self._next_particle()
        particle = self.particles[index]
        sample = sample_params(particle, self.streams.environments)
        self._write_sample(index, sample.params)
        goal = make_env(self.space, self.reference, self.kind).sample_goal(
            self.streams.environments
        )

        truncated = self._truncated()
        rand_transitions = self._rollout(sample.params, goal)
        self._consume(rand_transitions)
        rand_features = featurize_trajectory(rand_transitions)
        self._rand_features.append(rand_features)

        if self.remaining > 0:
            ref_transitions = self._rollout(self.reference, goal)
            self._consume(ref_transitions)
            self._ref_features.append(featurize_trajectory(ref_transitions))
        else:
            self.counters["reference_rollouts_skipped"] += 1

        reward = discriminator_reward(self.discriminator, rand_features)
        if self._ref_features:
            count = min(len(self._ref_features), len(self._rand_features))
            ref_batch = np.stack(list(self._ref_features)[-count:])
            rand_batch = np.stack(list(self._rand_features)[-count:])
            for _ in range(self.cfg.discriminator.updates_per_episode):
                self._latest_losses["discriminator"] = train_discriminator(
                    self.discriminator, ref_batch, rand_batch
                )

        self._write_episode(rand_transitions, index, reward)
        if not self._skip_curriculum(truncated):
            self._add_particle_episode(index, sample.params, sample.score, reward)


def run_training(cfg: RunConfig, run_dir: Optional[Path] = None) -> RunSummary:
    """Dispatch a configuration to its regime and run it."""
    return TrainingRun(cfg, run_dir).run()


def train_ssadr(cfg: RunConfig, run_dir: Optional[Path] = None) -> RunSummary:
    return run_training(cfg.model_copy(update={"algo": AlgoName.SSADR}), run_dir)


def train_udr(cfg: RunConfig, run_dir: Optional[Path] = None) -> RunSummary:
    return run_training(cfg.model_copy(update={"algo": AlgoName.UDR}), run_dir)


def train_unsup_default(cfg: RunConfig, run_dir: Optional[Path] = None) -> RunSummary:
    return run_training(cfg.model_copy(update={"algo": AlgoName.UNSUP_DEFAULT}), run_dir)


def train_adr_disc(cfg: RunConfig, run_dir: Optional[Path] = None) -> RunSummary:
    return run_training(cfg.model_copy(update={"algo": AlgoName.ADR_DISC}), run_dir)
