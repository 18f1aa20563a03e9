"""`cf sweep`: one isolated `cf train` process per seed."""

import os
import subprocess
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

import typer

from ..config import AlgoName
from ..envs import EnvKind
from ..errors import ArgumentError
from ..utils import console, fail, format_table, print_error, print_info, print_success

POLL_INTERVAL = 0.2


def parse_seeds(raw: str) -> List[int]:
    """``0,1,2`` or a range ``0-3`` (inclusive)."""
    try:
        if "-" in raw and "," not in raw:
            first, last = (int(part) for part in raw.split("-", 1))
            seeds = list(range(first, last + 1))
        else:
            seeds = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as e:
        raise ArgumentError(f"cannot parse seeds {raw!r}") from e
    if not seeds:
        raise ArgumentError("no seeds given")
    return seeds


def train_command(seed: int, passthrough: List[str]) -> List[str]:
    return [sys.executable, "-m", "cf_lab.main", "train", "--seed", str(seed), *passthrough]


def child_environment() -> Dict[str, str]:
    """Environment of a child run; the package root is put on PYTHONPATH."""
    env = dict(os.environ)
    package_root = str(Path(__file__).resolve().parents[2])
    existing = env.get("PYTHONPATH")
    env["PYTHONPATH"] = package_root if not existing else os.pathsep.join([package_root, existing])
    return env


def sweep(
    seeds: str = typer.Option("0,1,2", "--seeds", help="Seeds: 0,1,2 or 0-2"),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help="Concurrent child runs"),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="YAML run configuration"
    ),
    algo: Optional[AlgoName] = typer.Option(None, "--algo", help="Training regime"),
    env: Optional[EnvKind] = typer.Option(None, "--env", help="Environment kind"),
    timesteps: Optional[int] = typer.Option(None, "--timesteps", help="Bob-step budget"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output root"),
    assignments: Optional[List[str]] = typer.Option(None, "--set", help="section.key=value"),
):
    """Run `cf train` for every seed in separate processes; exit with the worst child status."""
    try:
        seed_list = parse_seeds(seeds)
    except ArgumentError as e:
        raise fail(e, "sweep failed")

    passthrough: List[str] = []
    if config_file is not None:
        passthrough += ["--config", str(config_file)]
    if algo is not None:
        passthrough += ["--algo", algo.value]
    if env is not None:
        passthrough += ["--env", env.value]
    if timesteps is not None:
        passthrough += ["--timesteps", str(timesteps)]
    if out is not None:
        passthrough += ["--out", str(out)]
    for assignment in assignments or []:
        passthrough += ["--set", assignment]

    environment = child_environment()
    pending = list(seed_list)
    running: Dict[int, subprocess.Popen] = {}
    statuses: Dict[int, int] = {}
    while pending or running:
        while pending and len(running) < jobs:
            seed = pending.pop(0)
            print_info(f"Starting seed {seed}")
            running[seed] = subprocess.Popen(
                train_command(seed, passthrough),
                env=environment,
                stdout=subprocess.DEVNULL,
                stderr=subprocess.DEVNULL,
            )
        finished = [seed for seed, child in running.items() if child.poll() is not None]
        if not finished:
            time.sleep(POLL_INTERVAL)
            continue
        # free slots are refilled on the next pass, whichever child ended
        for seed in finished:
            statuses[seed] = running.pop(seed).returncode
            if statuses[seed] == 0:
                print_success(f"Seed {seed} finished")
            else:
                print_error(f"Seed {seed} exited with status {statuses[seed]}")

    rows = [{"seed": seed, "exit_status": statuses[seed]} for seed in seed_list]
    console.print(format_table(rows), markup=False)
    # a child killed by a signal reports a negative status
    worst = max(abs(status) for status in statuses.values())
    if worst != 0:
        raise typer.Exit(worst)
