"""Tests for the replay buffer and the actor-critic learner."""

import numpy as np
import pytest

from cf_lab.ddpg import DdpgAgent, ReplayBuffer, Transition, copy_weights, policy_input
from cf_lab.errors import UsageError


def make_transition(index: int, state_dim: int = 4, action_dim: int = 2) -> Transition:
    return Transition(
        state=np.full(state_dim, float(index)),
        action=np.full(action_dim, 0.1 * index),
        reward=float(index),
        next_state=np.full(state_dim, float(index + 1)),
        done=0.0,
        goal=np.array([index, -index], dtype=np.float64),
    )


def small_agent(**kwargs) -> DdpgAgent:
    settings = {
        "obs_dim": 4,
        "action_dim": 2,
        "hidden_sizes": (8, 8),
        "rng": np.random.default_rng(0),
    }
    settings.update(kwargs)
    return DdpgAgent(**settings)


class TestReplayBuffer:
    """Test FIFO storage."""

    def test_fifo_eviction(self):
        """Test that the oldest transitions are overwritten first."""
        buffer = ReplayBuffer(3, state_dim=4, action_dim=2)
        for index in range(5):
            buffer.add(make_transition(index))

        assert len(buffer) == 3
        assert buffer.total_added == 5
        assert [t.reward for t in buffer.ordered()] == [2.0, 3.0, 4.0]

    def test_size_bound(self):
        """Test that the size never exceeds capacity."""
        buffer = ReplayBuffer(10, state_dim=4, action_dim=2)
        for index in range(25):
            buffer.add(make_transition(index))
            assert len(buffer) == min(index + 1, 10)

    def test_ordered_before_full(self):
        """Test insertion order while the buffer is filling."""
        buffer = ReplayBuffer(5, state_dim=4, action_dim=2)
        for index in range(3):
            buffer.add(make_transition(index))
        ordered = buffer.ordered()

        assert [t.reward for t in ordered] == [0.0, 1.0, 2.0]
        np.testing.assert_array_equal(ordered[1].goal, [1.0, -1.0])

    def test_sample_shapes(self):
        """Test batch shapes of a sample."""
        buffer = ReplayBuffer(10, state_dim=4, action_dim=2)
        for index in range(6):
            buffer.add(make_transition(index))
        batch = buffer.sample(4, np.random.default_rng(0))

        assert batch["states"].shape == (4, 4)
        assert batch["actions"].shape == (4, 2)
        assert batch["goals"].shape == (4, 2)
        assert batch["rewards"].shape == (4,)

    def test_sample_too_large(self):
        """Test that over-sized samples are refused."""
        buffer = ReplayBuffer(10, state_dim=4, action_dim=2)
        buffer.add(make_transition(0))
        with pytest.raises(UsageError):
            buffer.sample(2, np.random.default_rng(0))

    def test_invalid_capacity(self):
        """Test that a non-positive capacity is rejected."""
        with pytest.raises(UsageError):
            ReplayBuffer(0, state_dim=4, action_dim=2)


class TestPolicyInput:
    """Test goal substitution in the policy observation."""

    def test_single_vector(self):
        """Test that the last two state slots are replaced by the goal."""
        obs = policy_input(np.array([1.0, 2.0, 3.0, 9.0, 9.0]), np.array([0.5, 0.6]))
        np.testing.assert_array_equal(obs, [1.0, 2.0, 3.0, 0.5, 0.6])

    def test_batch(self):
        """Test substitution row by row."""
        states = np.arange(10, dtype=np.float64).reshape(2, 5)
        goals = np.array([[0.1, 0.2], [0.3, 0.4]])
        obs = policy_input(states, goals)

        np.testing.assert_array_equal(obs[:, :3], states[:, :3])
        np.testing.assert_array_equal(obs[:, 3:], goals)


class TestDdpgAgent:
    """Test the learner's update rules."""

    def test_actions_in_range(self):
        """Test that actions stay in [-1, 1] with and without noise."""
        agent = small_agent(exploration_noise=5.0)
        state = np.ones(4)
        goal = np.zeros(2)
        for explore in (False, True):
            action = agent.act(state, goal, explore=explore)
            assert action.shape == (2,)
            assert np.all(np.abs(action) <= 1.0)

    def test_deterministic_act(self):
        """Test that acting without exploration is repeatable."""
        agent = small_agent()
        state = np.array([0.1, 0.2, 0.3, 0.4])
        goal = np.array([0.5, 0.5])
        np.testing.assert_array_equal(agent.act(state, goal), agent.act(state, goal))

    def test_targets_start_equal(self):
        """Test that target networks start as copies of the online networks."""
        agent = small_agent()
        np.testing.assert_array_equal(agent.target_actor.params, agent.actor.params)
        np.testing.assert_array_equal(agent.target_critic.params, agent.critic.params)

    def test_tau_one_copies(self):
        """Test that tau = 1 makes the targets equal to the online networks."""
        agent = small_agent(tau=1.0)
        agent.actor.params += 0.5
        agent.critic.params -= 0.25
        agent.soft_update()

        np.testing.assert_array_equal(agent.target_actor.params, agent.actor.params)
        np.testing.assert_array_equal(agent.target_critic.params, agent.critic.params)

    def test_soft_update_geometric_convergence(self):
        """Test target - online shrinks by (1 - tau) per update under frozen online nets."""
        tau = 0.05
        agent = small_agent(tau=tau)
        offset = np.random.default_rng(1).normal(size=agent.actor.n_params)
        agent.target_actor.params[:] = agent.actor.params + offset
        for k in range(1, 101):
            agent.soft_update()
            np.testing.assert_allclose(
                agent.target_actor.params - agent.actor.params,
                offset * (1.0 - tau) ** k,
                atol=1e-6,
            )

    def test_td_targets(self):
        """Test r + gamma * (1 - done) * Q'(s', mu'(s')) on a fixed batch."""
        agent = small_agent(gamma=0.9)
        next_obs = np.array([[0.1, 0.2, 0.3, 0.4], [0.5, 0.6, 0.7, 0.8]])
        rewards = np.array([1.0, -2.0])
        dones = np.array([0.0, 1.0])

        next_actions = agent.target_actor.forward(next_obs)
        next_q = agent.target_critic.forward(np.hstack([next_obs, next_actions]))[:, 0]
        targets = agent.td_targets(rewards, next_obs, dones)

        assert targets[0] == pytest.approx(1.0 + 0.9 * next_q[0])
        assert targets[1] == pytest.approx(-2.0)

    def test_update_skipped_on_small_buffer(self):
        """Test that no update happens before the buffer holds a batch."""
        agent = small_agent()
        buffer = ReplayBuffer(10, state_dim=4, action_dim=2)
        buffer.add(make_transition(0))
        before = agent.actor.params.copy()

        assert agent.update(buffer, batch_size=4) is None
        assert agent.updates == 0
        np.testing.assert_array_equal(agent.actor.params, before)

    def test_critic_loss_decreases(self):
        """Test regression toward constant terminal rewards."""
        agent = small_agent(critic_lr=1e-2)
        rng = np.random.default_rng(2)
        buffer = ReplayBuffer(64, state_dim=4, action_dim=2)
        for _ in range(64):
            buffer.add(
                Transition(
                    state=rng.normal(size=4),
                    action=rng.uniform(-1.0, 1.0, size=2),
                    reward=-1.0,
                    next_state=rng.normal(size=4),
                    done=1.0,
                    goal=rng.normal(size=2),
                )
            )
        losses = [agent.update(buffer, batch_size=32).critic_loss for _ in range(300)]

        assert losses[-1] < 0.1 * losses[0]
        assert agent.updates == 300

    def test_update_moves_targets_slowly(self):
        """Test that one update moves the target actor by tau of the online change."""
        agent = small_agent(tau=0.01)
        buffer = ReplayBuffer(16, state_dim=4, action_dim=2)
        for index in range(16):
            buffer.add(make_transition(index))
        before_online = agent.actor.params.copy()
        before_target = agent.target_actor.params.copy()
        agent.update(buffer, batch_size=8)

        expected = 0.99 * before_target + 0.01 * agent.actor.params
        np.testing.assert_allclose(agent.target_actor.params, expected, atol=1e-12)
        assert not np.array_equal(agent.actor.params, before_online)

    def test_copy_weights_is_detached(self):
        """Test that copied actor weights do not follow later updates."""
        agent = small_agent()
        snapshot = copy_weights(agent)
        agent.actor.params += 1.0
        assert not np.allclose(snapshot, agent.actor.params)

    def test_networks_roles(self):
        """Test the checkpoint roles exposed by the agent."""
        assert set(small_agent().networks()) == {
            "actor",
            "critic",
            "target_actor",
            "target_critic",
        }
