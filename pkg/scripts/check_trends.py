#!/usr/bin/env python3
"""
Long-run trend checks for Curriculum Forge Lab

Trains the Pusher regimes for several seeds and checks three directional claims:

    calibration   SS-ADR avoids the unsolvable low-friction region of the
                  uncalibrated box, UDR samples it at its uniform measure
    learning      SS-ADR and goal-only self-play halve the zero-action distance
                  on the default Pusher
    hard          SS-ADR ends at most as far from the goal as goal-only
                  self-play on the icy Pusher

Runs take minutes to hours; use --scale to shrink every budget.

Usage:
    python scripts/check_trends.py
    python scripts/check_trends.py --seeds 0,1,2 --scale 0.1 --out trend_runs
"""

import argparse
import sys
from pathlib import Path
from statistics import mean
from typing import Dict, List, Tuple

import numpy as np
from tabulate import tabulate

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "cf-lab"))

from cf_lab.config import RunConfig  # noqa: E402
from cf_lab.envs import EnvKind, make_space  # noqa: E402
from cf_lab.envs.pusher import UNSOLVABLE_FRICTION  # noqa: E402
from cf_lab.logging_config import setup_logging  # noqa: E402
from cf_lab.metrics import read_metrics, records_of_kind  # noqa: E402
from cf_lab.trainer import METRICS_FILE, RunSummary, evaluate, run_training  # noqa: E402

CALIBRATION_STEPS = 100_000
LEARNING_STEPS = 200_000
TRAILING_WINDOW = 0.25


class TrendChecker:
    """Runs the trend experiments and collects one verdict row per check."""

    def __init__(self, seeds: List[int], scale: float, output_root: Path):
        self.seeds = seeds
        self.scale = scale
        self.output_root = output_root
        self.rows: List[Dict[str, object]] = []

    def budget(self, steps: int) -> Tuple[int, int]:
        """Scaled (total_timesteps, eval_interval) keeping ten evaluations per run."""
        interval = max(100, int(steps * self.scale) // 10)
        return interval * 10, interval

    def train(self, algo: str, seed: int, steps: int, range_mode: str) -> RunSummary:
        total, interval = self.budget(steps)
        cfg = RunConfig(
            algo=algo,
            env="pusher",
            seed=seed,
            total_timesteps=total,
            eval_interval=interval,
            range_mode=range_mode,
            output_root=str(self.output_root),
            run_name=f"{algo}_{range_mode}_seed{seed}",
        )
        print(f"Training {algo} seed {seed} ({range_mode}, {total} steps)...")
        return run_training(cfg)

    def record(self, check: str, subject: str, value: str, target: str, passed: bool) -> None:
        self.rows.append(
            {
                "check": check,
                "subject": subject,
                "value": value,
                "target": target,
                "result": "PASS" if passed else "FAIL",
            }
        )

    # -- calibration -------------------------------------------------------

    @staticmethod
    def unsolvable_fraction(summary: RunSummary) -> float:
        header, records = read_metrics(summary.run_dir / METRICS_FILE)
        start = (1.0 - TRAILING_WINDOW) * header["total_timesteps"]
        samples = records_of_kind(records, "sample")
        friction = np.array([r["xi_physical"][0] for r in samples if r["timestep"] >= start])
        return float(np.mean(friction < UNSOLVABLE_FRICTION))

    def check_calibration(self) -> None:
        space = make_space(EnvKind.PUSHER, calibrated=False)
        measure = (UNSOLVABLE_FRICTION - space.lower[0]) / space.width[0]
        for algo in ("ssadr", "udr"):
            fractions = [
                self.unsolvable_fraction(self.train(algo, seed, CALIBRATION_STEPS, "uncalibrated"))
                for seed in self.seeds
            ]
            value = mean(fractions)
            if algo == "ssadr":
                passed = value < 0.5 * measure
                target = f"< {0.5 * measure:.4f}"
            else:
                passed = abs(value - measure) <= 0.3 * measure
                target = f"{measure:.4f} +/- 30%"
            per_seed = ", ".join(f"{fraction:.4f}" for fraction in fractions)
            self.record("calibration", algo, f"{value:.4f} [{per_seed}]", target, passed)

    # -- learning and hard environment -------------------------------------

    def zero_action_distance(self) -> float:
        """Mean final distance of a policy that never moves, over each seed's goal set."""
        space = make_space(EnvKind.PUSHER)
        defaults = RunConfig()
        distances = [
            evaluate(
                lambda obs: np.zeros(2),
                EnvKind.PUSHER,
                space,
                space.reference_params(),
                n_episodes=defaults.eval.episodes,
                eval_seed=seed + defaults.eval.seed_offset,
            ).mean_final_distance
            for seed in self.seeds
        ]
        return mean(distances)

    def check_learning_and_hard(self) -> None:
        baseline = self.zero_action_distance()
        hard: Dict[str, List[float]] = {}
        for algo in ("ssadr", "unsup_default"):
            summaries = [
                self.train(algo, seed, LEARNING_STEPS, "calibrated") for seed in self.seeds
            ]
            default = [summary.final_distance("default") for summary in summaries]
            hard[algo] = [summary.final_distance("hard") for summary in summaries]
            good = sum(distance <= 0.5 * baseline for distance in default)
            per_seed = ", ".join(f"{distance:.4f}" for distance in default)
            self.record(
                "learning",
                algo,
                f"{good}/{len(default)} seeds [{per_seed}]",
                f"<= {0.5 * baseline:.4f} on >= 2 seeds",
                good >= min(2, len(default)),
            )

        ssadr, unsup = mean(hard["ssadr"]), mean(hard["unsup_default"])
        per_seed = "; ".join(
            f"{algo}: " + ", ".join(f"{distance:.4f}" for distance in values)
            for algo, values in hard.items()
        )
        self.record(
            "hard",
            "ssadr vs unsup_default",
            f"{ssadr:.4f} vs {unsup:.4f} [{per_seed}]",
            "ssadr <= unsup_default (weak with 3 seeds)",
            ssadr <= unsup,
        )

    def generate_report(self) -> bool:
        print("\n" + "=" * 60)
        print("TREND CHECK REPORT")
        print("=" * 60)
        print(tabulate(self.rows, headers="keys", tablefmt="grid"))
        return all(row["result"] == "PASS" for row in self.rows)

    def run(self) -> int:
        print(f"Seeds: {self.seeds}, budget scale: {self.scale}, output: {self.output_root}")
        self.check_calibration()
        self.check_learning_and_hard()
        if self.generate_report():
            print("\nAll trend checks passed")
            return 0
        print("\nSome trend checks failed")
        return 1


def main():
    """Main entry point."""
    parser = argparse.ArgumentParser(description="Long-run trend checks")
    parser.add_argument("--seeds", default="0,1,2", help="Comma-separated seeds")
    parser.add_argument("--scale", type=float, default=1.0, help="Budget multiplier")
    parser.add_argument("--out", default="trend_runs", help="Output root")
    args = parser.parse_args()

    setup_logging("WARNING")
    seeds = [int(seed) for seed in args.seeds.split(",") if seed.strip()]
    checker = TrendChecker(seeds, args.scale, Path(args.out))
    sys.exit(checker.run())


if __name__ == "__main__":
    main()
