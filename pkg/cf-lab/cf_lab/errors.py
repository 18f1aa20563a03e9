"""Exception hierarchy for Curriculum Forge Lab."""

from typing import Any, Dict, List, Optional


class LabError(Exception):
    """Base class for every error raised by the lab."""


class ConfigurationError(LabError):
    """Raised when a configuration or an environment factory call is invalid."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        """Initialize configuration error.

        Args:
            message: Summary of the problem
            diagnostics: Line-numbered diagnostics, one per offending key
        """
        super().__init__(message)
        self.diagnostics = diagnostics or []

    def __str__(self) -> str:
        if not self.diagnostics:
            return super().__str__()
        return "\n".join([super().__str__(), *self.diagnostics])


class UsageError(LabError):
    """Raised when an API is called in a way its contract forbids."""


class ArgumentError(UsageError):
    """Raised when an argument lies outside its valid domain."""


class NumericError(LabError):
    """Raised when a computation produces a non-finite value."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        """Initialize numeric error.

        Args:
            message: Summary of the failure
            context: Where the failure happened (component, timestep, ...)
        """
        super().__init__(message)
        self.context = context or {}

    def __str__(self) -> str:
        if not self.context:
            return super().__str__()
        details = ", ".join(f"{key}={value}" for key, value in sorted(self.context.items()))
        return f"{super().__str__()} ({details})"


class CheckpointError(ConfigurationError):
    """Raised when a checkpoint is missing, unreadable or mismatched."""


class MetricsFormatError(LabError):
    """Raised when a metrics stream line cannot be parsed."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
