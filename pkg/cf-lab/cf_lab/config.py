"""Run configuration: typed models, YAML loading and override precedence.

Precedence, lowest first: model defaults, the YAML file, ``.env`` and the
process environment, command-line flags and ``--set section.key=value``.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, model_validator

from .adr import SvpgConfig
from .envs import EnvKind
from .errors import ConfigurationError
from .selfplay import BobRewardMode


class AlgoName(str, Enum):
    """Training regimes."""

    SSADR = "ssadr"
    UDR = "udr"
    UNSUP_DEFAULT = "unsup_default"
    ADR_DISC = "adr_disc"


class RangeMode(str, Enum):
    """Which randomization box the run trains over."""

    CALIBRATED = "calibrated"
    UNCALIBRATED = "uncalibrated"


class UdrGoalMode(str, Enum):
    """Goal choice of the uniform-randomization baseline."""

    FIXED = "fixed"
    UNIFORM = "uniform"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DdpgConfig(_Section):
    """Bob's actor-critic learner."""

    hidden_sizes: List[PositiveInt] = Field(default_factory=lambda: [400, 300])
    actor_lr: float = Field(default=1e-3, gt=0)
    critic_lr: float = Field(default=1e-3, gt=0)
    gamma: float = Field(default=0.99, gt=0, le=1)
    tau: float = Field(default=0.005, gt=0, le=1)
    exploration_noise: float = Field(default=0.1, ge=0)
    batch_size: PositiveInt = 100
    replay_capacity: PositiveInt = 100_000
    warmup_steps: int = Field(default=1000, ge=0)


class SelfPlayConfig(_Section):
    """Alice's stopping policy and the self-play rewards."""

    reward_scale: float = Field(default=0.2, ge=0, description="upsilon")
    stopping_hidden_sizes: List[PositiveInt] = Field(default_factory=lambda: [300, 300])
    stopping_lr: float = Field(default=1e-3, gt=0)
    baseline_rate: float = Field(default=0.01, gt=0, le=1)
    alice_explore: bool = True
    bob_reward: BobRewardMode = BobRewardMode.ENV


class SvpgSection(SvpgConfig):
    model_config = ConfigDict(extra="forbid")


class DiscriminatorConfig(_Section):
    """Trajectory discriminator of the discriminator-reward regime."""

    hidden_sizes: List[PositiveInt] = Field(default_factory=lambda: [64, 64])
    learning_rate: float = Field(default=1e-3, gt=0)
    history: PositiveInt = Field(default=64, description="Trajectories kept per label")
    updates_per_episode: PositiveInt = 1


class EvalConfig(_Section):
    """Periodic evaluation."""

    episodes: PositiveInt = 20
    seed_offset: int = 10_000
    hard: bool = True


class LoggingConfig(_Section):
    level: str = "INFO"
    format: str = Field(default="console", pattern="^(console|json)$")
    file: Optional[str] = None


class RunConfig(_Section):
    """Everything a training run needs; ``config.resolved`` is its YAML dump."""

    algo: AlgoName = AlgoName.SSADR
    env: EnvKind = EnvKind.PUSHER
    seed: int = 0
    total_timesteps: PositiveInt = 200_000
    eval_interval: PositiveInt = 5000
    max_episode_steps: PositiveInt = 100
    range_mode: RangeMode = RangeMode.CALIBRATED
    udr_goal_mode: UdrGoalMode = UdrGoalMode.FIXED
    loss_log_interval: PositiveInt = 1000
    output_root: str = "runs"
    run_name: Optional[str] = None

    ddpg: DdpgConfig = Field(default_factory=DdpgConfig)
    selfplay: SelfPlayConfig = Field(default_factory=SelfPlayConfig)
    svpg: SvpgSection = Field(default_factory=SvpgSection)
    discriminator: DiscriminatorConfig = Field(default_factory=DiscriminatorConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @model_validator(mode="after")
    def _check_schedule(self) -> "RunConfig":
        if self.total_timesteps % self.eval_interval != 0:
            raise ValueError(
                f"eval_interval ({self.eval_interval}) must divide "
                f"total_timesteps ({self.total_timesteps})"
            )
        if self.ddpg.batch_size > self.ddpg.replay_capacity:
            raise ValueError("ddpg.batch_size must not exceed ddpg.replay_capacity")
        return self

    @property
    def calibrated(self) -> bool:
        return self.range_mode is RangeMode.CALIBRATED

    @property
    def run_dir(self) -> Path:
        name = self.run_name or f"{self.algo.value}_{self.env.value}_seed{self.seed}"
        return Path(self.output_root) / name


# -- YAML positions ------------------------------------------------------------


def _node_lines(node: yaml.Node, prefix: Tuple[Any, ...] = ()) -> Dict[Tuple[Any, ...], int]:
    """Map every key path of a composed YAML document to its 1-based line."""
    lines: Dict[Tuple[Any, ...], int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (key_node.value,)
            lines[path] = key_node.start_mark.line + 1
            lines.update(_node_lines(value_node, path))
    elif isinstance(node, yaml.SequenceNode):
        for index, item in enumerate(node.value):
            path = prefix + (index,)
            lines[path] = item.start_mark.line + 1
            lines.update(_node_lines(item, path))
    return lines


def _line_for(location: Tuple[Any, ...], lines: Dict[Tuple[Any, ...], int]) -> Optional[int]:
    for end in range(len(location), 0, -1):
        line = lines.get(tuple(location[:end]))
        if line is not None:
            return line
    return None


def format_validation_errors(
    error: ValidationError, lines: Optional[Dict[Tuple[Any, ...], int]] = None
) -> List[str]:
    """Render pydantic errors as ``line N: section.key: message`` diagnostics."""
    lines = lines or {}
    diagnostics = []
    for item in error.errors():
        location = tuple(item["loc"])
        dotted = ".".join(str(part) for part in location) or "config"
        line = _line_for(location, lines)
        prefix = f"line {line}: " if line is not None else ""
        diagnostics.append(f"{prefix}{dotted}: {item['msg']}")
    return diagnostics


def read_config_file(path: Path) -> Tuple[Dict[str, Any], Dict[Tuple[Any, ...], int]]:
    """Parse a YAML config file into data plus key line numbers.

    Raises:
        ConfigurationError: If the file is missing, unparsable or not a mapping
    """
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    text = path.read_text()
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark is not None else ""
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigurationError(f"cannot parse {path}", [f"{where}{problem}"]) from e
    if data is None:
        return {}, {}
    if not isinstance(data, dict):
        raise ConfigurationError(
            f"{path} must contain a mapping at the top level", ["line 1: config: not a mapping"]
        )
    return data, _node_lines(node)


# -- overrides ----------------------------------------------------------------


def _assign(data: Dict[str, Any], dotted_key: str, value: Any) -> None:
    parts = dotted_key.split(".")
    target = data
    for part in parts[:-1]:
        nested = target.setdefault(part, {})
        if not isinstance(nested, dict):
            raise ConfigurationError(f"cannot set {dotted_key}: {part} is not a section")
        target = nested
    target[parts[-1]] = value


def parse_set_overrides(assignments: Sequence[str]) -> Dict[str, Any]:
    """Turn ``section.key=value`` strings into a flat dotted-key mapping.

    Values are parsed as YAML scalars, so ``0.5`` becomes a float and ``[64, 64]`` a list.
    """
    overrides: Dict[str, Any] = {}
    for assignment in assignments:
        key, separator, raw = assignment.partition("=")
        if not separator or not key.strip():
            raise ConfigurationError(
                f"invalid override {assignment!r}",
                [f"--set {assignment}: expected section.key=value"],
            )
        try:
            overrides[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"invalid override value in {assignment!r}") from e
    return overrides


def env_overrides() -> Dict[str, Any]:
    """Overrides taken from CF_* environment variables."""
    overrides: Dict[str, Any] = {}
    if os.getenv("CF_OUT"):
        overrides["output_root"] = os.getenv("CF_OUT")
    if os.getenv("CF_LOG_LEVEL"):
        overrides["logging.level"] = os.getenv("CF_LOG_LEVEL")
    if os.getenv("CF_LOG_FORMAT"):
        overrides["logging.format"] = os.getenv("CF_LOG_FORMAT")
    return overrides


class ConfigManager:
    """Builds validated run configurations from files, environment and flags."""

    def __init__(self, use_dotenv: bool = True):
        self.use_dotenv = use_dotenv

    def load_config(
        self,
        config_file: Optional[Path] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> RunConfig:
        """Load and validate a run configuration.

        Args:
            config_file: YAML file; defaults only when omitted
            overrides: Dotted-key overrides from the command line

        Returns:
            Validated configuration

        Raises:
            ConfigurationError: With line-numbered diagnostics when validation fails
        """
        if self.use_dotenv:
            load_dotenv()

        data: Dict[str, Any] = {}
        lines: Dict[Tuple[Any, ...], int] = {}
        if config_file is not None:
            data, lines = read_config_file(Path(config_file))

        for key, value in env_overrides().items():
            _assign(data, key, value)
        for key, value in (overrides or {}).items():
            if value is not None:
                _assign(data, key, value)

        try:
            return RunConfig(**data)
        except ValidationError as e:
            source = str(config_file) if config_file is not None else "command line"
            raise ConfigurationError(
                f"invalid configuration ({source})", format_validation_errors(e, lines)
            ) from e

    @staticmethod
    def save_resolved(config: RunConfig, path: Path) -> None:
        """Write the fully resolved configuration as YAML."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.safe_dump(
                config.model_dump(mode="json"), f, sort_keys=False, default_flow_style=False
            )


config_manager = ConfigManager()
