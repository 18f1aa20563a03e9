"""Tests for self-play rewards, the stopping policy and self-play episodes."""

import numpy as np
import pytest

from cf_lab.ddpg import DdpgAgent, ReplayBuffer
from cf_lab.envs import EnvKind, make_env, make_space
from cf_lab.errors import NumericError
from cf_lab.selfplay import (
    BobRewardMode,
    StoppingPolicy,
    alice_reward,
    bob_selfplay_reward,
    run_alice,
    run_selfplay_episode,
    update_stopping_policy,
)


def pusher_envs(max_steps: int = 20):
    space = make_space(EnvKind.PUSHER)
    env_ref = make_env(space, space.reference_params(), EnvKind.PUSHER, max_steps)
    env_rand = make_env(space, space.sample_uniform(np.random.default_rng(9)), EnvKind.PUSHER,
                        max_steps)
    return env_ref, env_rand


def small_agent(seed: int = 0) -> DdpgAgent:
    return DdpgAgent(8, 2, hidden_sizes=(16, 16), rng=np.random.default_rng(seed))


def small_stopping(seed: int = 0) -> StoppingPolicy:
    return StoppingPolicy(8, hidden_sizes=(16,), rng=np.random.default_rng(seed))


def force_stop_probability(policy: StoppingPolicy, logit: float) -> None:
    weight, bias = policy.net.layers()[-1]
    weight[:] = 0.0
    bias[:] = logit


class TestRewards:
    """Test the self-play reward equations."""

    def test_random_fixture(self):
        """Test both rewards against direct evaluation on 1000 random cases."""
        rng = np.random.default_rng(0)
        t_a = rng.integers(1, 101, size=1000)
        t_b = rng.integers(1, 101, size=1000)
        scale = rng.uniform(0.0, 1.0, size=1000)
        for a, b, upsilon in zip(t_a, t_b, scale):
            r_a = alice_reward(int(a), int(b), float(upsilon))
            r_b = bob_selfplay_reward(int(b), float(upsilon))
            assert r_a == float(upsilon) * max(0, int(b) - int(a))
            assert r_b == -float(upsilon) * int(b)
            assert r_a >= 0.0
            assert r_b <= 0.0

    def test_bob_failure(self):
        """Test t_b = 100, t_a = 20, upsilon = 0.2 gives 16."""
        assert alice_reward(20, 100, 0.2) == pytest.approx(16.0)

    def test_faster_bob_pays_alice_nothing(self):
        """Test r_a = 0 whenever t_b <= t_a."""
        assert alice_reward(30, 30, 0.2) == 0.0
        assert alice_reward(30, 5, 0.2) == 0.0


class TestStoppingPolicy:
    """Test the STOP policy and its policy-gradient update."""

    def test_zero_advantage_leaves_parameters(self):
        """Test that a reward equal to the baseline gives no parameter change."""
        policy = small_stopping()
        rng = np.random.default_rng(1)
        inputs = rng.normal(size=(4, 16))
        decisions = np.array([0.0, 0.0, 0.0, 1.0])
        before = policy.net.params.copy()
        policy.update(inputs, decisions, [-0.1] * 4, reward=policy.baseline)

        np.testing.assert_array_equal(policy.net.params, before)
        assert policy.baseline == 0.0

    def test_zero_advantage_gradient(self):
        """Test that the surrogate gradient vanishes at zero advantage."""
        policy = small_stopping()
        inputs = np.random.default_rng(2).normal(size=(3, 16))
        grad = policy.surrogate_gradient(inputs, np.array([0.0, 1.0, 0.0]), 0.0)
        assert not grad.any()

    def test_advantage_sign_flips_update(self):
        """Test opposite-sign parameter deltas for rewards above and below the baseline."""
        inputs = np.random.default_rng(3).normal(size=(5, 16))
        decisions = np.array([0.0, 0.0, 1.0, 0.0, 1.0])
        above, below = small_stopping(seed=4), small_stopping(seed=4)
        start = above.net.params.copy()

        above.update(inputs, decisions, [-0.5] * 5, reward=1.0)
        below.update(inputs, decisions, [-0.5] * 5, reward=-1.0)
        delta_above = above.net.params - start
        delta_below = below.net.params - start

        assert np.abs(delta_above).max() > 0.0
        np.testing.assert_allclose(delta_above, -delta_below, atol=1e-15)

    def test_positive_advantage_reinforces_decisions(self):
        """Test that a positive advantage raises the log-probability of the taken decisions."""
        policy = small_stopping(seed=5)
        inputs = np.random.default_rng(6).normal(size=(6, 16))
        decisions = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
        before = policy.surrogate(inputs, decisions, 1.0)
        for _ in range(20):
            policy.update(inputs, decisions, [-0.5] * 6, reward=policy.baseline + 1.0)

        assert policy.surrogate(inputs, decisions, 1.0) > before

    def test_baseline_running_mean(self):
        """Test baseline <- baseline + rate * (r - baseline)."""
        policy = StoppingPolicy(8, hidden_sizes=(4,), baseline_rate=0.5,
                                rng=np.random.default_rng(0))
        policy.update(np.zeros((0, 16)), np.zeros(0), [], reward=2.0)
        policy.update(np.zeros((0, 16)), np.zeros(0), [], reward=4.0)
        assert policy.baseline == pytest.approx(2.5)

    def test_non_finite_log_prob(self):
        """Test that a non-finite log-probability raises a numeric error."""
        policy = small_stopping()
        with pytest.raises(NumericError):
            policy.update(np.zeros((1, 16)), np.array([1.0]), [-np.inf], reward=1.0)

    def test_decide_log_probability(self):
        """Test that decide reports the log-probability of the sampled decision."""
        policy = small_stopping(seed=7)
        initial, current = np.zeros(8), np.ones(8)
        probability = policy.stop_probability(initial, current)
        stop, log_prob, features = policy.decide(initial, current, np.random.default_rng(0))

        expected = np.log(probability) if stop else np.log(1.0 - probability)
        assert log_prob == pytest.approx(expected)
        assert features.shape == (16,)


class TestSelfPlayEpisode:
    """Test one Alice/Bob episode."""

    def test_certain_stop_gives_t_a_one(self):
        """Test that a stop probability of 1 stops Alice before her first action."""
        policy = small_stopping()
        force_stop_probability(policy, 50.0)
        env_ref, _ = pusher_envs()
        agent = small_agent()
        intent = np.array([0.8, 0.2])
        for seed in range(5):
            t_a, target, inputs, decisions, log_probs = run_alice(
                agent.actor, policy, env_ref, intent, np.random.default_rng(seed)
            )
            assert t_a == 1
            np.testing.assert_allclose(target, [0.4, 0.5])
            np.testing.assert_array_equal(decisions, [1.0])
            assert log_probs == [0.0]
            assert inputs.shape == (1, 16)

    def test_degenerate_goal(self):
        """Test that Bob reaches Alice's untouched puck at once and Alice earns nothing."""
        policy = small_stopping()
        force_stop_probability(policy, 50.0)
        env_ref, env_rand = pusher_envs()
        agent = small_agent()
        outcome = run_selfplay_episode(
            agent.actor.copy(),
            policy,
            agent,
            env_ref,
            env_rand,
            np.random.default_rng(0),
            intent=np.array([0.8, 0.2]),
            bob_random_actions=True,
        )

        assert outcome.t_a == 1
        assert outcome.t_b == 1
        assert outcome.bob_success
        assert outcome.alice_reward == 0.0
        assert outcome.bob_reward == pytest.approx(-0.2)

    def test_never_stopping_alice_is_forced_at_limit(self):
        """Test that STOP is forced at the step limit with no log-probability recorded."""
        policy = small_stopping()
        force_stop_probability(policy, -50.0)
        env_ref, _ = pusher_envs(max_steps=12)
        agent = small_agent()
        t_a, _, inputs, decisions, log_probs = run_alice(
            agent.actor, policy, env_ref, np.array([0.9, 0.9]), np.random.default_rng(0)
        )

        assert t_a == 12
        assert len(log_probs) == 11
        assert not decisions.any()
        assert inputs.shape == (11, 16)

    def test_episode_invariants(self):
        """Test reward signs, step bounds and replay contents over random episodes."""
        env_ref, env_rand = pusher_envs(max_steps=15)
        agent = small_agent()
        policy = small_stopping()
        replay = ReplayBuffer(10_000, state_dim=8, action_dim=2)
        rng = np.random.default_rng(11)
        added = 0
        for _ in range(20):
            outcome = run_selfplay_episode(
                agent.actor.copy(),
                policy,
                agent,
                env_ref,
                env_rand,
                rng,
                alice_noise=0.1,
                replay=replay,
            )
            added += outcome.t_b
            assert 1 <= outcome.t_a <= 15
            assert 1 <= outcome.t_b <= 15
            assert outcome.alice_reward >= 0.0
            assert outcome.bob_reward <= 0.0
            assert outcome.alice_actions == outcome.t_a - 1
            for transition in outcome.bob_transitions:
                np.testing.assert_array_equal(transition.goal, outcome.target)
            assert outcome.bob_success == bool(outcome.bob_transitions[-1].done)
            update_stopping_policy(policy, outcome)
        assert len(replay) == added

    def test_selfplay_reward_mode(self):
        """Test that the self-play reward mode stores -upsilon per Bob step."""
        env_ref, env_rand = pusher_envs()
        agent = small_agent()
        outcome = run_selfplay_episode(
            agent.actor.copy(),
            small_stopping(),
            agent,
            env_ref,
            env_rand,
            np.random.default_rng(0),
            reward_scale=0.3,
            bob_reward_mode=BobRewardMode.SELFPLAY,
        )
        assert all(t.reward == -0.3 for t in outcome.bob_transitions)

    def test_env_reward_mode(self):
        """Test that the environment reward mode stores the negative distance."""
        env_ref, env_rand = pusher_envs()
        agent = small_agent()
        outcome = run_selfplay_episode(
            agent.actor.copy(),
            small_stopping(),
            agent,
            env_ref,
            env_rand,
            np.random.default_rng(1),
        )
        last = outcome.bob_transitions[-1]
        assert last.reward == pytest.approx(-outcome.bob_final_distance)

    def test_episode_is_reproducible(self):
        """Test that equal seeds give equal outcomes."""
        outcomes = []
        for _ in range(2):
            env_ref, env_rand = pusher_envs()
            agent = small_agent()
            outcomes.append(
                run_selfplay_episode(
                    agent.actor.copy(),
                    small_stopping(),
                    agent,
                    env_ref,
                    env_rand,
                    np.random.default_rng(21),
                    alice_noise=0.1,
                )
            )
        assert outcomes[0].t_a == outcomes[1].t_a
        assert outcomes[0].t_b == outcomes[1].t_b
        np.testing.assert_array_equal(outcomes[0].target, outcomes[1].target)

    def test_goal_blind_bob_retraces_alice(self):
        """Test t_b <= t_a when Bob runs Alice's goal-blind policy in the reference environment."""
        space = make_space(EnvKind.PUSHER)
        agent = small_agent(3)
        first_weight, _ = agent.actor.layers()[0]
        first_weight[:, -2:] = 0.0
        policy = small_stopping(3)
        force_stop_probability(policy, -2.0)
        rng = np.random.default_rng(30)

        gaps = []
        for _ in range(30):
            env_ref = make_env(space, space.reference_params(), EnvKind.PUSHER, 20)
            env_same = make_env(space, space.reference_params(), EnvKind.PUSHER, 20)
            outcome = run_selfplay_episode(
                agent.actor.copy(),
                policy,
                agent,
                env_ref,
                env_same,
                rng,
                alice_noise=0.0,
                bob_explore=False,
            )
            assert outcome.bob_success
            assert outcome.alice_reward == 0.0
            gaps.append(outcome.t_b - outcome.t_a)

        assert max(gaps) <= 0
        assert len(set(gaps)) > 1
