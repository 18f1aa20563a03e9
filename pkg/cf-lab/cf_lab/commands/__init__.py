"""Command implementations for the cf CLI."""
