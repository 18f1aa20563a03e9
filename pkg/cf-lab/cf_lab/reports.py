"""Sampling histograms and learning curves built from metrics streams."""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import structlog  # noqa: E402

from .errors import ArgumentError, ConfigurationError  # noqa: E402
from .metrics import records_of_kind  # noqa: E402

logger = structlog.get_logger(__name__)

HISTOGRAM_COLUMNS = ["bin_low", "bin_high", "count", "fraction"]
CURVE_COLUMNS = ["algo", "eval_env", "timestep", "mean", "min", "max", "n_seeds"]

Stream = Tuple[Dict[str, Any], List[Dict[str, Any]]]


def sample_histogram(
    header: Dict[str, Any],
    records: Sequence[Dict[str, Any]],
    dim: int = 0,
    bins: int = 10,
    window: float = 1.0,
) -> pd.DataFrame:
    """Histogram of sampled physical parameter values over the trailing part of training.

    Args:
        header: Stream header (provides the space bounds and the run length)
        records: Stream records
        dim: Parameter index
        bins: Number of equal-width bins over [lower, upper]
        window: Trailing fraction of training to include, in (0, 1]

    Returns:
        Frame with columns bin_low, bin_high, count, fraction

    Raises:
        ArgumentError: On an invalid dim, bin count or window
        ConfigurationError: When the stream holds no sample records in the window
    """
    if not 0.0 < window <= 1.0:
        raise ArgumentError(f"window must lie in (0, 1], got {window}")
    if bins < 1:
        raise ArgumentError("bins must be positive")
    space = header.get("space", {})
    lower, upper = space.get("lower", []), space.get("upper", [])
    if not 0 <= dim < len(lower):
        raise ArgumentError(f"dim {dim} is outside the {len(lower)}-dimensional space")

    samples = records_of_kind(records, "sample")
    if not samples:
        raise ConfigurationError("metrics stream contains no sample records")
    total = header.get("total_timesteps") or max(record["timestep"] for record in samples)
    start = (1.0 - window) * total
    values = np.array(
        [record["xi_physical"][dim] for record in samples if record["timestep"] >= start]
    )
    if values.size == 0:
        raise ConfigurationError(f"no sample records in the trailing {window:.0%} of training")

    counts, edges = np.histogram(values, bins=bins, range=(lower[dim], upper[dim]))
    return pd.DataFrame(
        {
            "bin_low": edges[:-1],
            "bin_high": edges[1:],
            "count": counts,
            "fraction": counts / values.size,
        },
        columns=HISTOGRAM_COLUMNS,
    )


def learning_curves(streams: Sequence[Stream]) -> pd.DataFrame:
    """Per-algorithm mean and min/max envelope of final distance against timestep.

    Seeds are aligned on the scheduled evaluation timestep.

    Raises:
        ConfigurationError: When the streams mix environment kinds or hold no evaluations
    """
    if not streams:
        raise ArgumentError("at least one metrics stream is required")
    kinds = sorted({str(header.get("env")) for header, _ in streams})
    if len(kinds) > 1:
        raise ConfigurationError(f"metrics streams mix environment kinds: {', '.join(kinds)}")

    rows = []
    for header, records in streams:
        for record in records_of_kind(records, "eval"):
            rows.append(
                {
                    "algo": record.get("algo") or header.get("algo"),
                    "eval_env": record["eval_env"],
                    "timestep": record.get("scheduled_timestep", record["timestep"]),
                    "seed": record.get("seed", header.get("seed")),
                    "distance": record["mean_final_distance"],
                }
            )
    if not rows:
        raise ConfigurationError("metrics streams contain no eval records")

    frame = pd.DataFrame(rows)
    curves = (
        frame.groupby(["algo", "eval_env", "timestep"], sort=True)["distance"]
        .agg(mean="mean", min="min", max="max", n_seeds="count")
        .reset_index()
    )
    return curves[CURVE_COLUMNS]


def write_histogram_svg(histogram: pd.DataFrame, path: Path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    widths = histogram["bin_high"] - histogram["bin_low"]
    ax.bar(histogram["bin_low"], histogram["fraction"], width=widths, align="edge")
    ax.set_xlabel("parameter value")
    ax.set_ylabel("fraction of samples")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def write_curves_svg(curves: pd.DataFrame, path: Path) -> Path:
    """One panel per evaluation environment, one line and envelope per algorithm."""
    eval_envs = sorted(curves["eval_env"].unique())
    fig, axes = plt.subplots(1, len(eval_envs), figsize=(4.0 * len(eval_envs), 3.0), squeeze=False)
    for ax, eval_env in zip(axes[0], eval_envs):
        for algo, series in curves[curves["eval_env"] == eval_env].groupby("algo"):
            ax.plot(series["timestep"], series["mean"], label=algo)
            ax.fill_between(series["timestep"], series["min"], series["max"], alpha=0.2)
        ax.set_title(eval_env)
        ax.set_xlabel("timestep")
        ax.set_ylabel("final distance (m)")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
