"""Main CLI application for Curriculum Forge Lab."""

import typer

from . import __version__
from .commands import analyze, evaluate, sweep, train
from .utils import print_info

app = typer.Typer(
    name="cf",
    help="Curriculum Forge Lab - train and analyse curriculum-learning runs",
    no_args_is_help=True,
)

app.command("train")(train.train)
app.command("eval")(evaluate.evaluate_checkpoint)
app.command("sample-hist")(analyze.sample_hist)
app.command("plot")(analyze.plot)
app.command("sweep")(sweep.sweep)


@app.command()
def version():
    """Show CLI version information."""
    print_info(f"Curriculum Forge Lab v{__version__}")


@app.callback()
def main():
    """
    Curriculum Forge Lab - co-evolving goal and environment curricula.

    Commands:
    - train: Run one regime (ssadr, udr, unsup_default, adr_disc) for one seed
    - eval: Evaluate a checkpoint on the default, hard or an explicit environment
    - sample-hist: Histogram of sampled environment parameters
    - plot: Learning curves across runs and seeds
    - sweep: One train process per seed

    Examples:
        cf train --algo ssadr --env pusher --seed 0 --timesteps 20000
        cf eval runs/ssadr_pusher_seed0/checkpoints/final --params hard
        cf sample-hist runs/ssadr_pusher_seed0/metrics.jsonl --window 0.25
    """


if __name__ == "__main__":
    app()
