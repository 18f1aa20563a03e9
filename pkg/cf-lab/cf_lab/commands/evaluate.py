"""`cf eval`: evaluate a saved policy."""

from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from ..approx import load_bundle
from ..envs import AnyEnvParams, EnvKind, EnvParams, RandomizationSpace, hard_env_params, make_space
from ..errors import ArgumentError, CheckpointError, ConfigurationError, LabError
from ..metrics import MetricsWriter
from ..trainer import EvalEnv, evaluate
from ..utils import console, fail, format_table, print_info, print_success

EVALUATIONS_FILE = "evaluations.jsonl"
DEFAULT_SEED_OFFSET = 10_000


def parse_xi(raw: str) -> List[float]:
    """Comma-separated normalized coordinates, each in [0, 1]."""
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as e:
        raise ArgumentError(f"--xi must be comma-separated numbers, got {raw!r}") from e
    if not values:
        raise ArgumentError("--xi is empty")
    outside = [value for value in values if not 0.0 <= value <= 1.0]
    if outside:
        raise ArgumentError(f"--xi components must lie in [0, 1], got {outside}")
    return values


def resolve_params(
    mode: EvalEnv, kind: EnvKind, space: RandomizationSpace, xi: Optional[str]
) -> AnyEnvParams:
    if mode is EvalEnv.DEFAULT:
        return space.reference_params()
    if mode is EvalEnv.HARD:
        return hard_env_params(kind)
    if xi is None:
        raise ArgumentError("--params explicit requires --xi")
    values = parse_xi(xi)
    if len(values) != space.n_dims:
        raise ConfigurationError(
            f"{kind.value} has {space.n_dims} randomized parameters, --xi gave {len(values)}"
        )
    return EnvParams(values)


def evaluate_checkpoint(
    checkpoint: Path = typer.Argument(..., help="Checkpoint directory (holds manifest.yaml)"),
    env: Optional[EnvKind] = typer.Option(None, "--env", help="Expected environment kind"),
    params: EvalEnv = typer.Option(EvalEnv.DEFAULT, "--params", help="default, hard or explicit"),
    xi: Optional[str] = typer.Option(
        None, "--xi", help="Normalized parameters for --params explicit, e.g. 0.2,0.5"
    ),
    episodes: int = typer.Option(25, "--episodes", "-n", min=1, help="Evaluation episodes"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Goal seed (defaults to the run seed)"),
    seed_offset: int = typer.Option(DEFAULT_SEED_OFFSET, "--seed-offset", help="Goal seed offset"),
):
    """Roll the checkpoint's actor deterministically and report the final distance."""
    try:
        networks, manifest = load_bundle(checkpoint)
        if "actor" not in networks:
            raise CheckpointError(f"{checkpoint} holds no actor network")
        kind = EnvKind(manifest.get("env", ""))
        if env is not None and env is not kind:
            raise CheckpointError(
                f"checkpoint was trained on {kind.value}, not {env.value}"
            )
        calibrated = manifest.get("range_mode", "calibrated") == "calibrated"
        space = make_space(kind, calibrated=calibrated)
        env_params = resolve_params(params, kind, space, xi)
        run_seed = int(manifest.get("seed", 0)) if seed is None else seed
        actor = networks["actor"]

        record = evaluate(
            actor,
            kind,
            space,
            env_params,
            n_episodes=episodes,
            eval_seed=run_seed + seed_offset,
            max_steps=int(manifest.get("max_episode_steps", 100)),
            eval_env=params,
            timestep=int(manifest.get("timestep", 0)),
            seed=run_seed,
            algo=str(manifest.get("algo", "")),
        )
    except ValueError as e:
        raise fail(CheckpointError(f"{checkpoint}: {e}"), "evaluation failed")
    except LabError as e:
        raise fail(e, "evaluation failed")

    distances = np.asarray(record.distances)
    console.print(
        format_table(
            [
                {
                    "eval_env": params.value,
                    "episodes": record.n_episodes,
                    "mean": float(distances.mean()),
                    "std": float(distances.std()),
                    "min": float(distances.min()),
                    "max": float(distances.max()),
                    "success_rate": record.success_rate,
                }
            ]
        ),
        markup=False,
    )
    print_success(
        f"mean final distance {record.mean_final_distance:.4f} ± {distances.std():.4f} m"
    )

    header = {
        "algo": manifest.get("algo"),
        "env": kind.value,
        "seed": run_seed,
        "range_mode": manifest.get("range_mode"),
        "space": space.to_dict(),
    }
    with MetricsWriter(checkpoint / EVALUATIONS_FILE, header, append=True) as writer:
        writer.write(record.model_dump(mode="json"))
    print_info(f"Appended to {checkpoint / EVALUATIONS_FILE}")
