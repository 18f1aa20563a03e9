"""Evaluation schedule over Bob's environment steps."""

from dataclasses import dataclass
from typing import List

from ..errors import ConfigurationError


@dataclass(frozen=True)
class EvalSchedule:
    """Evaluations at every multiple of ``eval_interval`` up to ``total_timesteps``."""

    total_timesteps: int
    eval_interval: int

    def __post_init__(self) -> None:
        if self.total_timesteps <= 0 or self.eval_interval <= 0:
            raise ConfigurationError("timesteps and eval_interval must be positive")
        if self.total_timesteps % self.eval_interval != 0:
            raise ConfigurationError(
                f"eval_interval ({self.eval_interval}) must divide "
                f"total_timesteps ({self.total_timesteps})"
            )

    @property
    def n_evaluations(self) -> int:
        return self.total_timesteps // self.eval_interval

    def planned(self) -> List[int]:
        return [self.eval_interval * k for k in range(1, self.n_evaluations + 1)]

    def crossed(self, previous: int, current: int) -> List[int]:
        """Scheduled timesteps in (previous, current]."""
        first = previous // self.eval_interval + 1
        last = min(current, self.total_timesteps) // self.eval_interval
        return [self.eval_interval * k for k in range(first, last + 1)]
