"""Validated per-invocation run settings (command-line flags over a flat run file)."""

import os
from dataclasses import replace
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator

from config import ARCHS, Config, ModelConfig, TrainConfig

OUT_ENV_VAR = "SHOPGRAPH_OUT"


class RunConfig(BaseModel):
    """Overrides for one CLI invocation; ``None`` means "use the config file"."""

    model_config = ConfigDict(extra="forbid")

    subcommand: str | None = None
    instance: str = "ft06"
    arch: str | None = None
    seeds: list[int] | None = None
    layers: int | None = None
    steps: int | None = None
    episodes: int | None = None
    workers: int | None = None
    out_dir: Path | None = None

    @field_validator("arch", mode="before")
    @classmethod
    def _normalize_arch(cls, value: Any) -> str | None:
        if value is None:
            return None
        arch = str(value).lower().replace("-", "_")
        if arch not in ARCHS:
            raise ValueError(f"arch must be one of {', '.join(ARCHS)}, got '{value}'")
        return arch

    @field_validator("seeds", mode="before")
    @classmethod
    def _split_seeds(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [int(s) for s in value.replace(" ", "").split(",") if s]
        return value

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, value: list[int] | None) -> list[int] | None:
        if value is None:
            return None
        if not value:
            raise ValueError("seeds must not be empty")
        if any(s < 0 for s in value):
            raise ValueError("seeds must be non-negative")
        if len(set(value)) != len(value):
            raise ValueError(f"seeds must be unique, got {value}")
        return value

    @field_validator("layers", "steps", "episodes")
    @classmethod
    def _check_positive(cls, value: int | None) -> int | None:
        if value is not None and value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    @field_validator("workers")
    @classmethod
    def _check_workers(cls, value: int | None) -> int | None:
        if value is not None and value < 0:
            raise ValueError(f"workers must be >= 0, got {value}")
        return value

    @classmethod
    def merge(cls, flags: dict[str, Any], file_values: dict[str, Any] | None = None) -> "RunConfig":
        """Flat-file values overridden by every flag that was actually given."""
        values = dict(file_values or {})
        values.update({k: v for k, v in flags.items() if v is not None})
        return cls(**values)

    def resolve_out_dir(self, config: Config) -> Path:
        """Flag, then ``$SHOPGRAPH_OUT``, then the config file's ``out_dir``."""
        if self.out_dir is not None:
            return self.out_dir
        env = os.environ.get(OUT_ENV_VAR)
        if env:
            return Path(env)
        return Path(config.out_dir)

    def resolve_seeds(self, config: Config) -> list[int]:
        return list(self.seeds) if self.seeds is not None else list(config.seeds)

    def resolve_workers(self, config: Config) -> int:
        return self.workers if self.workers is not None else config.workers

    def resolve_reference_arch(self, config: Config) -> str:
        """Arch the significance tests compare everything else against."""
        return self.arch or config.eval.reference_arch

    def resolve_episodes(self, config: Config) -> int:
        return self.episodes if self.episodes is not None else config.eval.episodes

    def build_model_config(self, config: Config) -> ModelConfig:
        model = replace(config.model, arch=self.arch or config.model.arch)
        if self.layers is not None:
            model = replace(model, layers=self.layers)
        model.validate()
        return model

    def build_train_config(self, config: Config, seed: int) -> TrainConfig:
        train = replace(config.train, seed=seed)
        if self.steps is not None:
            train = replace(train, total_steps=self.steps)
        train.validate()
        return train
