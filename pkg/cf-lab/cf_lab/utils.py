"""Console helpers and exit-code mapping for the cf CLI."""

from typing import Any, Dict, List, Optional

import typer
from rich.console import Console
from tabulate import tabulate

from .errors import ConfigurationError, LabError, MetricsFormatError, NumericError, UsageError

console = Console()

EXIT_USAGE = 2
EXIT_NUMERIC = 3


def format_table(rows: List[Dict[str, Any]], floatfmt: str = ".4f") -> str:
    """Format a list of records as a grid table.

    Args:
        rows: Records sharing the same keys
        floatfmt: Float format passed to tabulate

    Returns:
        Formatted table string
    """
    if not rows:
        return "No data available"
    headers = list(rows[0].keys())
    body = [[row.get(header, "") for header in headers] for row in rows]
    return tabulate(body, headers=headers, tablefmt="grid", floatfmt=floatfmt)


def print_success(message: str) -> None:
    """Print success message.

    Args:
        message: Success message
    """
    console.print(f"✅ {message}", style="green", markup=False)


def print_error(message: str) -> None:
    """Print error message.

    Args:
        message: Error message
    """
    console.print(f"❌ {message}", style="red", markup=False)


def print_info(message: str) -> None:
    console.print(f"ℹ️  {message}", style="blue", markup=False)


def exit_code_for(error: LabError) -> int:
    if isinstance(error, NumericError):
        return EXIT_NUMERIC
    if isinstance(error, (ConfigurationError, UsageError, MetricsFormatError)):
        return EXIT_USAGE
    return 1


def fail(error: LabError, context: Optional[str] = None) -> typer.Exit:
    """Report an error with its diagnostics and build the matching typer.Exit."""
    prefix = f"{context}: " if context else ""
    print_error(f"{prefix}{error}")
    return typer.Exit(exit_code_for(error))
