"""Randomization spaces and the parameter points drawn from them."""

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..errors import ConfigurationError


@dataclass(frozen=True)
class RandomizationSpace:
    """Bounded box of simulator parameters with a reference point.

    Attributes:
        lower: Lower bound per dimension, physical units
        upper: Upper bound per dimension, physical units
        reference: Default parameters, physical units
        names: Human-readable parameter names
    """

    lower: np.ndarray
    upper: np.ndarray
    reference: np.ndarray
    names: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=np.float64)
        upper = np.asarray(self.upper, dtype=np.float64)
        reference = np.asarray(self.reference, dtype=np.float64)
        if lower.ndim != 1 or lower.shape != upper.shape or lower.shape != reference.shape:
            raise ConfigurationError("lower, upper and reference must be vectors of equal length")
        if lower.size == 0:
            raise ConfigurationError("randomization space needs at least one dimension")
        if np.any(lower >= upper):
            raise ConfigurationError("every lower bound must be strictly below its upper bound")
        if np.any(reference < lower) or np.any(reference > upper):
            raise ConfigurationError("reference point lies outside the randomization box")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "reference", reference)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"xi_{i}" for i in range(lower.size)))

    @property
    def n_dims(self) -> int:
        return int(self.lower.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def denormalize(self, normalized: Sequence[float]) -> np.ndarray:
        """Map normalized coordinates in [0, 1] to physical units."""
        return self.lower + np.asarray(normalized, dtype=np.float64) * self.width

    def normalize(self, physical: Sequence[float]) -> np.ndarray:
        """Map physical values to normalized coordinates (not clipped)."""
        return (np.asarray(physical, dtype=np.float64) - self.lower) / self.width

    def reference_params(self) -> "EnvParams":
        return EnvParams(self.normalize(self.reference))

    def sample_uniform(self, rng: np.random.Generator) -> "EnvParams":
        """Uniform draw over the whole box."""
        return EnvParams(rng.uniform(0.0, 1.0, size=self.n_dims))

    def contains(self, physical: Sequence[float]) -> bool:
        values = np.asarray(physical, dtype=np.float64)
        return bool(np.all(values >= self.lower) and np.all(values <= self.upper))

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "reference": self.reference.tolist(),
        }


class EnvParams:
    """A point of the randomization space in normalized coordinates.

    Components are clipped to [0, 1] at construction.
    """

    __slots__ = ("values",)

    def __init__(self, values: Sequence[float]):
        array = np.atleast_1d(np.asarray(values, dtype=np.float64)).copy()
        if array.ndim != 1:
            raise ConfigurationError("environment parameters must be a flat vector")
        self.values = np.clip(array, 0.0, 1.0)

    @property
    def n_dims(self) -> int:
        return int(self.values.size)

    def resolve(self, space: RandomizationSpace) -> np.ndarray:
        if self.n_dims != space.n_dims:
            raise ConfigurationError(
                f"parameter vector has {self.n_dims} dimensions, space expects {space.n_dims}"
            )
        return space.denormalize(self.values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EnvParams) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"EnvParams({self.values.tolist()})"


class PhysicalEnvParams:
    """Parameters given directly in physical units, possibly outside the training box.

    Used for the hard evaluation environments.
    """

    __slots__ = ("values",)

    def __init__(self, values: Sequence[float]):
        self.values = np.atleast_1d(np.asarray(values, dtype=np.float64)).copy()

    @property
    def n_dims(self) -> int:
        return int(self.values.size)

    def resolve(self, space: RandomizationSpace) -> np.ndarray:
        if self.n_dims != space.n_dims:
            raise ConfigurationError(
                f"parameter vector has {self.n_dims} dimensions, space expects {space.n_dims}"
            )
        return self.values.copy()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhysicalEnvParams) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"PhysicalEnvParams({self.values.tolist()})"


AnyEnvParams = Union[EnvParams, PhysicalEnvParams]
