"""Self-play rewards for the goal setter (Alice) and the goal reacher (Bob)."""


def alice_reward(t_a: int, t_b: int, scale: float) -> float:
    """upsilon * max(0, t_b - t_a): Alice is paid for goals Bob is slower to reach."""
    return scale * max(0, t_b - t_a)


def bob_selfplay_reward(t_b: int, scale: float) -> float:
    """-upsilon * t_b: Bob is charged for every step he needs."""
    return -scale * t_b
