"""Seed discipline: every consumer of randomness gets its own stream."""

from dataclasses import dataclass

import numpy as np


@dataclass
class RunStreams:
    """Independent generators spawned from the run seed.

    Attributes:
        networks: Initialization of Alice's stopping policy and the discriminator
        agent: Bob's network initialization, exploration noise and replay sampling
        episodes: Intent goals, STOP sampling, Alice noise and warmup actions
        environments: Parameter proposals and baseline goals
        particles: Initial particle locations
    """

    networks: np.random.Generator
    agent: np.random.Generator
    episodes: np.random.Generator
    environments: np.random.Generator
    particles: np.random.Generator


def make_streams(seed: int) -> RunStreams:
    children = np.random.SeedSequence(seed).spawn(5)
    networks, agent, episodes, environments, particles = (
        np.random.default_rng(child) for child in children
    )
    return RunStreams(
        networks=networks,
        agent=agent,
        episodes=episodes,
        environments=environments,
        particles=particles,
    )
