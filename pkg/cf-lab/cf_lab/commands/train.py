"""`cf train`: run one training regime."""

from pathlib import Path
from typing import Any, Dict, List, Optional

import typer

from ..config import AlgoName, RangeMode, config_manager, parse_set_overrides
from ..envs import EnvKind
from ..errors import LabError
from ..logging_config import setup_logging
from ..trainer import METRICS_FILE, EvalSchedule, run_training
from ..utils import console, fail, format_table, print_info, print_success


def train(
    seed: int = typer.Option(..., "--seed", help="Run seed (required)"),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="YAML run configuration"
    ),
    algo: Optional[AlgoName] = typer.Option(None, "--algo", help="Training regime"),
    env: Optional[EnvKind] = typer.Option(None, "--env", help="Environment kind"),
    timesteps: Optional[int] = typer.Option(
        None, "--timesteps", help="Bob-step budget (total_timesteps)"
    ),
    eval_interval: Optional[int] = typer.Option(
        None, "--eval-interval", help="Bob-steps between evaluations"
    ),
    range_mode: Optional[RangeMode] = typer.Option(None, "--range", help="Randomization box"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output root (overrides CF_OUT)"),
    run_name: Optional[str] = typer.Option(None, "--run-name", help="Run directory name"),
    assignments: Optional[List[str]] = typer.Option(
        None, "--set", help="Override a config key: section.key=value (repeatable)"
    ),
    dry_run: bool = typer.Option(False, "--dry-run", help="Print the evaluation plan and exit"),
):
    """Train a policy with one of the four regimes and write its run directory."""
    try:
        overrides: Dict[str, Any] = parse_set_overrides(assignments or [])
        flags = {
            "seed": seed,
            "algo": algo.value if algo else None,
            "env": env.value if env else None,
            "total_timesteps": timesteps,
            "eval_interval": eval_interval,
            "range_mode": range_mode.value if range_mode else None,
            "output_root": str(out) if out else None,
            "run_name": run_name,
        }
        overrides.update({key: value for key, value in flags.items() if value is not None})
        cfg = config_manager.load_config(config_file, overrides)
    except LabError as e:
        raise fail(e, "invalid configuration")

    setup_logging(cfg.logging.level, cfg.logging.format, cfg.logging.file)

    if dry_run:
        schedule = EvalSchedule(cfg.total_timesteps, cfg.eval_interval)
        planned = schedule.planned()
        eval_envs = ["default", "hard"] if cfg.eval.hard else ["default"]
        rows = [
            {
                "eval_env": eval_env,
                "evaluations": schedule.n_evaluations,
                "first": planned[0],
                "last": planned[-1],
                "episodes_each": cfg.eval.episodes,
            }
            for eval_env in eval_envs
        ]
        print_info(
            f"{cfg.algo.value} on {cfg.env.value}: {cfg.total_timesteps} Bob-steps, "
            f"evaluation every {cfg.eval_interval}"
        )
        console.print(format_table(rows), markup=False)
        return

    try:
        summary = run_training(cfg)
    except LabError as e:
        raise fail(e, "training failed")

    print_success(f"Run written to {summary.run_dir}")
    rows = [
        {
            "eval_env": eval_env,
            "final_mean_distance": summary.final_distance(eval_env),
        }
        for eval_env in ("default", "hard")
        if summary.final_distance(eval_env) is not None
    ]
    if rows:
        console.print(format_table(rows), markup=False)
    print_info(
        f"Bob-steps {summary.bob_steps}, Alice-steps {summary.alice_steps}, "
        f"episodes {summary.episodes}; metrics in {summary.run_dir / METRICS_FILE}"
    )
