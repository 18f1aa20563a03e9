"""Tests for run configuration loading and validation."""

from pathlib import Path

import pytest
import yaml

from cf_lab.config import (
    AlgoName,
    ConfigManager,
    RangeMode,
    RunConfig,
    parse_set_overrides,
    read_config_file,
)
from cf_lab.envs import EnvKind
from cf_lab.errors import ConfigurationError
from cf_lab.selfplay import BobRewardMode


def write_config(directory: Path, text: str) -> Path:
    path = directory / "run.yaml"
    path.write_text(text)
    return path


class TestRunConfig:
    """Test model defaults and cross-field validation."""

    def test_defaults(self):
        """Test the default hyperparameters."""
        cfg = RunConfig()

        assert cfg.algo is AlgoName.SSADR
        assert cfg.ddpg.gamma == 0.99
        assert cfg.ddpg.batch_size == 100
        assert cfg.ddpg.hidden_sizes == [400, 300]
        assert cfg.selfplay.reward_scale == 0.2
        assert cfg.selfplay.bob_reward is BobRewardMode.ENV
        assert cfg.svpg.n_particles == 10
        assert cfg.svpg.temperature == 0.1
        assert cfg.svpg.learning_rate == 0.01
        assert cfg.svpg.max_step == 0.05
        assert cfg.svpg.normalize_advantages
        assert cfg.max_episode_steps == 100
        assert cfg.eval.seed_offset == 10_000
        assert cfg.calibrated

    def test_run_dir_name(self):
        """Test the default run directory layout."""
        cfg = RunConfig(algo="udr", env="reacher", seed=3, output_root="out")
        assert cfg.run_dir == Path("out") / "udr_reacher_seed3"
        assert RunConfig(run_name="custom", output_root="out").run_dir == Path("out") / "custom"

    def test_interval_must_divide(self):
        """Test that eval_interval must divide total_timesteps."""
        with pytest.raises(ValueError):
            RunConfig(total_timesteps=10_000, eval_interval=3000)

    def test_unknown_key_rejected(self):
        """Test that misspelled keys are rejected."""
        with pytest.raises(ValueError):
            RunConfig(ddpg={"gama": 0.9})


class TestConfigFile:
    """Test YAML loading and line-numbered diagnostics."""

    def test_load_file(self, tmp_path):
        """Test a valid file."""
        path = write_config(
            tmp_path, "algo: adr_disc\nenv: reacher\nrange_mode: uncalibrated\nseed: 4\n"
        )
        cfg = ConfigManager(use_dotenv=False).load_config(path)

        assert cfg.algo is AlgoName.ADR_DISC
        assert cfg.env is EnvKind.REACHER
        assert cfg.range_mode is RangeMode.UNCALIBRATED
        assert cfg.seed == 4

    def test_nested_value_line_number(self, tmp_path):
        """Test that an invalid nested value is reported with its line."""
        path = write_config(tmp_path, "algo: ssadr\nenv: pusher\nddpg:\n  gamma: 1.5\n")
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(use_dotenv=False).load_config(path)

        assert any(d.startswith("line 4: ddpg.gamma") for d in excinfo.value.diagnostics)
        assert "line 4: ddpg.gamma" in str(excinfo.value)

    def test_unknown_algo_line_number(self, tmp_path):
        """Test that an unknown regime is reported on its line."""
        path = write_config(tmp_path, "seed: 1\nalgo: ppo\n")
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(use_dotenv=False).load_config(path)
        assert any(d.startswith("line 2: algo") for d in excinfo.value.diagnostics)

    def test_unknown_key_line_number(self, tmp_path):
        """Test that an unknown section key is reported on its line."""
        path = write_config(tmp_path, "svpg:\n  n_particles: 4\n  bogus: 1\n")
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(use_dotenv=False).load_config(path)
        assert any(d.startswith("line 3: svpg.bogus") for d in excinfo.value.diagnostics)

    def test_every_error_reported(self, tmp_path):
        """Test one diagnostic per offending key."""
        path = write_config(tmp_path, "seed: x\nddpg:\n  tau: 0\n  batch_size: -1\n")
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(use_dotenv=False).load_config(path)
        assert len(excinfo.value.diagnostics) == 3

    def test_yaml_syntax_error(self, tmp_path):
        """Test that unparsable YAML is a configuration error with a line."""
        path = write_config(tmp_path, "algo: ssadr\nddpg: [unclosed\n")
        with pytest.raises(ConfigurationError) as excinfo:
            read_config_file(path)
        assert excinfo.value.diagnostics[0].startswith("line ")

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a configuration error."""
        with pytest.raises(ConfigurationError):
            read_config_file(tmp_path / "absent.yaml")

    def test_top_level_must_be_mapping(self, tmp_path):
        """Test that a list document is rejected."""
        path = write_config(tmp_path, "- 1\n- 2\n")
        with pytest.raises(ConfigurationError):
            read_config_file(path)

    def test_empty_file_gives_defaults(self, tmp_path):
        """Test that an empty file resolves to defaults."""
        path = write_config(tmp_path, "")
        assert ConfigManager(use_dotenv=False).load_config(path) == RunConfig()


class TestOverrides:
    """Test override parsing and precedence."""

    def test_parse_set_values(self):
        """Test YAML scalar parsing of --set values."""
        overrides = parse_set_overrides(
            ["ddpg.gamma=0.95", "ddpg.hidden_sizes=[64, 64]", "eval.hard=false", "env=reacher"]
        )
        assert overrides == {
            "ddpg.gamma": 0.95,
            "ddpg.hidden_sizes": [64, 64],
            "eval.hard": False,
            "env": "reacher",
        }

    def test_malformed_assignment(self):
        """Test that assignments without '=' are rejected."""
        with pytest.raises(ConfigurationError):
            parse_set_overrides(["ddpg.gamma"])

    def test_precedence(self, tmp_path, monkeypatch):
        """Test defaults < file < environment < command line."""
        path = write_config(
            tmp_path, "seed: 1\noutput_root: from_file\nlogging:\n  level: DEBUG\n"
        )
        monkeypatch.setenv("CF_OUT", "from_env")
        monkeypatch.setenv("CF_LOG_FORMAT", "json")
        cfg = ConfigManager(use_dotenv=False).load_config(
            path, {"seed": 2, "logging.level": "ERROR"}
        )

        assert cfg.seed == 2
        assert cfg.output_root == "from_env"
        assert cfg.logging.format == "json"
        assert cfg.logging.level == "ERROR"

    def test_command_line_beats_environment(self, monkeypatch):
        """Test that an explicit output root wins over CF_OUT."""
        monkeypatch.setenv("CF_OUT", "from_env")
        cfg = ConfigManager(use_dotenv=False).load_config(None, {"output_root": "from_flag"})
        assert cfg.output_root == "from_flag"

    def test_invalid_override_has_no_line(self):
        """Test diagnostics for invalid command-line values."""
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(use_dotenv=False).load_config(None, {"svpg.n_particles": 0})
        assert excinfo.value.diagnostics[0].startswith("svpg.n_particles")


class TestResolvedConfig:
    """Test the config.resolved dump."""

    def test_round_trip(self, tmp_path):
        """Test that the resolved YAML reloads to an equal configuration."""
        cfg = RunConfig(algo="udr", env="reacher", seed=9, ddpg={"hidden_sizes": [32]})
        path = tmp_path / "config.resolved"
        ConfigManager.save_resolved(cfg, path)

        assert ConfigManager(use_dotenv=False).load_config(path) == cfg
        assert yaml.safe_load(path.read_text())["algo"] == "udr"
