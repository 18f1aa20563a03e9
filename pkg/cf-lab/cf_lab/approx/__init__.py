"""Trainable function approximators and their optimizer."""

from .checkpoint import load_approximator, load_bundle, save_approximator, save_bundle
from .network import Activation, Approximator
from .optim import AdamState, adam_step

__all__ = [
    "Activation",
    "AdamState",
    "Approximator",
    "adam_step",
    "load_approximator",
    "load_bundle",
    "save_approximator",
    "save_bundle",
]
