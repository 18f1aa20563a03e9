"""Training regimes, evaluation protocol and seed discipline."""

from .evaluation import EvalEnv, EvalRecord, evaluate, evaluate_run_point, evaluation_goals
from .runner import (
    METRICS_FILE,
    RESOLVED_CONFIG_FILE,
    RunSummary,
    TrainingRun,
    run_training,
    train_adr_disc,
    train_ssadr,
    train_udr,
    train_unsup_default,
)
from .schedule import EvalSchedule
from .seeding import RunStreams, make_streams

__all__ = [
    "METRICS_FILE",
    "RESOLVED_CONFIG_FILE",
    "EvalEnv",
    "EvalRecord",
    "EvalSchedule",
    "RunStreams",
    "RunSummary",
    "TrainingRun",
    "evaluate",
    "evaluate_run_point",
    "evaluation_goals",
    "make_streams",
    "run_training",
    "train_adr_disc",
    "train_ssadr",
    "train_udr",
    "train_unsup_default",
]
