"""Test package for Curriculum Forge Lab."""
