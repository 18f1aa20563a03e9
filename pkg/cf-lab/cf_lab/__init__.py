"""Curriculum Forge Lab: self-supervised goal and environment curricula for goal reaching."""

__version__ = "1.0.0"
