"""Tests for configuration: dataclasses, ConfigManager and RunConfig."""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from config import DEFAULT_CONFIG, Config, EvalConfig, ModelConfig, TrainConfig
from config_manager import ConfigManager, read_flat_file
from run_config import OUT_ENV_VAR, RunConfig


class TestModelConfig:
    """Tests for ModelConfig dataclass."""

    def test_defaults(self):
        """Defaults are the published architecture."""
        cfg = ModelConfig()
        assert (cfg.layers, cfg.hidden_dim, cfg.heads, cfg.embed_dim, cfg.dropout) == (3, 128, 4, 64, 0.1)

    def test_round_trip(self):
        """to_dict/from_dict preserve every field."""
        cfg = ModelConfig(arch="gin", layers=2, hidden_dim=16, heads=2, embed_dim=8)
        assert ModelConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_key_rejected(self):
        """Unknown keys raise ValueError."""
        with pytest.raises(ValueError, match="Unknown ModelConfig key"):
            ModelConfig.from_dict({"arch": "hgt", "width": 3})

    def test_heads_must_divide_hidden(self):
        """hidden_dim must split evenly across heads."""
        with pytest.raises(ValueError, match="divisible"):
            ModelConfig.from_dict({"hidden_dim": 10, "heads": 4})

    def test_unknown_arch(self):
        """Only hgt, homo_hgt and gin are accepted."""
        with pytest.raises(ValueError, match="arch"):
            ModelConfig(arch="gat").validate()


class TestTrainConfig:
    """Tests for TrainConfig dataclass."""

    def test_defaults(self):
        """Defaults follow the PPO protocol."""
        cfg = TrainConfig()
        assert cfg.total_steps == 50_000
        assert (cfg.gamma, cfg.gae_lambda, cfg.clip_eps) == (0.99, 0.95, 0.2)
        assert (cfg.value_coef, cfg.entropy_coef) == (0.5, 0.01)
        assert (cfg.epochs, cfg.minibatch, cfg.lr, cfg.max_grad_norm) == (4, 32, 3e-4, 0.5)
        assert cfg.episodes_per_update == 4

    def test_betas_become_tuple(self):
        """adam_betas read from JSON lists are stored as a tuple."""
        cfg = TrainConfig.from_dict({"adam_betas": [0.8, 0.9]})
        assert cfg.adam_betas == (0.8, 0.9)

    @pytest.mark.parametrize("override", [
        {"total_steps": 0},
        {"gamma": 0.0},
        {"gamma": 1.5},
        {"gae_lambda": -0.1},
        {"clip_eps": 0.0},
        {"minibatch": 0},
        {"lr": -1.0},
    ])
    def test_invalid_values(self, override):
        """Out-of-range hyperparameters are rejected."""
        with pytest.raises(ValueError):
            TrainConfig.from_dict(override)


class TestConfig:
    """Tests for the top-level Config."""

    def test_from_dict(self, sample_config_dict):
        """Nested sections and protocol lists are parsed."""
        cfg = Config.from_dict(sample_config_dict)
        assert cfg.model.arch == "gin"
        assert cfg.train.total_steps == 1000
        assert cfg.train.adam_betas == (0.8, 0.99)
        assert cfg.eval == EvalConfig(episodes=10, reference_arch="hgt")
        assert cfg.seeds == [0, 1]
        assert cfg.workers == 1

    def test_round_trip(self, sample_config_dict):
        """to_dict output loads back to an equal config."""
        cfg = Config.from_dict(sample_config_dict)
        assert Config.from_dict(cfg.to_dict()) == cfg

    def test_default_protocol(self):
        """Five evaluation seeds, four ablation depths on three seeds."""
        assert DEFAULT_CONFIG.seeds == [0, 1, 2, 3, 4]
        assert DEFAULT_CONFIG.ablation_layers == [1, 2, 3, 4]
        assert DEFAULT_CONFIG.ablation_seeds == [0, 1, 2]

    def test_unknown_top_level_key(self):
        """Unknown top-level keys are rejected."""
        with pytest.raises(ValueError, match="Unknown Config key"):
            Config.from_dict({"instances": []})

    def test_shipped_config_json_matches_defaults(self):
        """config.json at the project root holds the defaults."""
        path = Path(__file__).parent.parent / "config.json"
        assert Config.from_dict(json.loads(path.read_text())) == DEFAULT_CONFIG


class TestConfigManager:
    """Tests for ConfigManager persistence."""

    def test_missing_file_gives_defaults(self, tmp_path):
        """A missing file falls back to the default config."""
        manager = ConfigManager(tmp_path / "missing.json")
        assert manager.config == DEFAULT_CONFIG

    def test_load_from_file(self, tmp_path, sample_config_dict):
        """A settings file on disk is parsed into Config and cached."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps(sample_config_dict))
        manager = ConfigManager(path)
        assert manager.config == Config.from_dict(sample_config_dict)
        assert manager.config is manager.config

    def test_invalid_json_gives_defaults(self, tmp_path):
        """Malformed JSON is reported and defaults are used."""
        path = tmp_path / "config.json"
        path.write_text("{not json")
        assert ConfigManager(path).load() == DEFAULT_CONFIG


class TestFlatFile:
    """Tests for the key=value run file reader."""

    def test_reads_pairs(self, tmp_path):
        """Comments and blank lines are skipped; dashes become underscores."""
        path = tmp_path / "run.cfg"
        path.write_text("# smoke run\n\ninstance = ft06\nseeds=0,1\nout-dir = /tmp/x\n")
        assert read_flat_file(path) == {"instance": "ft06", "seeds": "0,1", "out_dir": "/tmp/x"}

    def test_bad_line(self, tmp_path):
        """A line without '=' names the file and line."""
        path = tmp_path / "run.cfg"
        path.write_text("instance=ft06\njust words\n")
        with pytest.raises(ValueError, match=":2:"):
            read_flat_file(path)


class TestRunConfig:
    """Tests for the pydantic RunConfig."""

    def test_flags_win_over_file(self):
        """Flags override file values; None flags do not."""
        run = RunConfig.merge(
            {"arch": "gin", "steps": None},
            {"arch": "hgt", "steps": "2000", "seeds": "0, 1,2"},
        )
        assert run.arch == "gin"
        assert run.steps == 2000
        assert run.seeds == [0, 1, 2]

    def test_unknown_key_rejected(self):
        """Unknown keys fail validation."""
        with pytest.raises(ValidationError):
            RunConfig.merge({}, {"learning_rate": "1"})

    def test_arch_normalized(self):
        """Dashed arch names are accepted."""
        assert RunConfig(arch="Homo-HGT").arch == "homo_hgt"

    @pytest.mark.parametrize("values", [
        {"arch": "gat"},
        {"seeds": []},
        {"seeds": [0, 0]},
        {"seeds": [-1]},
        {"layers": 0},
        {"steps": 0},
        {"workers": -2},
    ])
    def test_invalid(self, values):
        """Invalid overrides are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(**values)

    def test_out_dir_precedence(self, monkeypatch, tmp_path):
        """Flag, then environment variable, then config out_dir."""
        config = Config(out_dir="from-config")
        monkeypatch.delenv(OUT_ENV_VAR, raising=False)
        assert RunConfig().resolve_out_dir(config) == Path("from-config")
        monkeypatch.setenv(OUT_ENV_VAR, str(tmp_path))
        assert RunConfig().resolve_out_dir(config) == tmp_path
        assert RunConfig(out_dir=tmp_path / "flag").resolve_out_dir(config) == tmp_path / "flag"

    def test_overrides_applied(self):
        """Layer and step overrides reach the model and train configs."""
        config = Config()
        run = RunConfig(arch="gin", layers=4, steps=500)
        assert run.build_model_config(config).arch == "gin"
        assert run.build_model_config(config).layers == 4
        train = run.build_train_config(config, seed=3)
        assert (train.total_steps, train.seed) == (500, 3)

    def test_defaults_from_config(self):
        """Without flags, arch/seeds/episodes come from the settings."""
        config = Config(seeds=[7, 8])
        run = RunConfig()
        assert run.build_model_config(config).arch == "hgt"
        assert run.resolve_seeds(config) == [7, 8]
        assert run.resolve_episodes(config) == 50
        assert run.resolve_reference_arch(config) == "hgt"
