"""`cf sample-hist` and `cf plot`: artifacts derived from metrics streams."""

from pathlib import Path
from typing import List, Optional

import typer

from ..errors import ConfigurationError, LabError
from ..metrics import read_metrics
from ..reports import learning_curves, sample_histogram, write_curves_svg, write_histogram_svg
from ..utils import console, fail, format_table, print_success


def _read(path: Path):
    if not path.exists():
        raise ConfigurationError(f"metrics file not found: {path}")
    return read_metrics(path)


def _emit_csv(frame, output: Optional[Path]) -> None:
    if output is None:
        typer.echo(frame.to_csv(index=False), nl=False)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(output, index=False)
    print_success(f"CSV written to {output}")


def sample_hist(
    metrics: Path = typer.Argument(..., help="metrics.jsonl of a run"),
    dim: int = typer.Option(0, "--dim", help="Parameter index"),
    bins: int = typer.Option(10, "--bins", min=1, help="Number of bins"),
    window: float = typer.Option(
        1.0, "--window", help="Trailing fraction of training to include, in (0, 1]"
    ),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="CSV path (stdout if omitted)"
    ),
    svg: Optional[Path] = typer.Option(None, "--svg", help="Also write an SVG bar chart"),
):
    """Histogram of sampled physical parameter values (bin_low, bin_high, count, fraction)."""
    try:
        header, records = _read(metrics)
        histogram = sample_histogram(header, records, dim=dim, bins=bins, window=window)
    except LabError as e:
        raise fail(e, "sample-hist failed")

    _emit_csv(histogram, output)
    if svg is not None:
        names = header.get("space", {}).get("names", [])
        title = names[dim] if dim < len(names) else f"xi_{dim}"
        write_histogram_svg(histogram, svg, title=f"{header.get('algo')} {title}")
        print_success(f"SVG written to {svg}")


def plot(
    metrics: List[Path] = typer.Argument(..., help="One or more metrics.jsonl files"),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="CSV path (stdout if omitted)"
    ),
    svg: Optional[Path] = typer.Option(None, "--svg", help="Also write an SVG learning-curve plot"),
    summary: bool = typer.Option(False, "--summary", help="Print the last point of every series"),
):
    """Learning curves: mean and min/max envelope of final distance per algorithm and eval env."""
    try:
        streams = [_read(path) for path in metrics]
        curves = learning_curves(streams)
    except LabError as e:
        raise fail(e, "plot failed")

    _emit_csv(curves, output)
    if summary:
        last = curves.sort_values("timestep").groupby(["algo", "eval_env"]).tail(1)
        console.print(format_table(last.to_dict(orient="records")), markup=False)
    if svg is not None:
        write_curves_svg(curves, svg)
        print_success(f"SVG written to {svg}")
