"""Configuration for training, evaluation and experiments."""

from dataclasses import dataclass, field, fields
from typing import Any

ARCHS = ("hgt", "homo_hgt", "gin")


def _check_keys(cls: type, data: dict[str, Any]) -> None:
    """Reject keys the dataclass does not define."""
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"Unknown {cls.__name__} key(s): {', '.join(unknown)}")


@dataclass
class ModelConfig:
    """Policy network shape."""
    arch: str = "hgt"
    layers: int = 3
    hidden_dim: int = 128
    heads: int = 4
    embed_dim: int = 64
    dropout: float = 0.1
    in_features: int = 3

    def validate(self) -> None:
        if self.arch not in ARCHS:
            raise ValueError(f"arch must be one of {', '.join(ARCHS)}, got '{self.arch}'")
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.hidden_dim < 1 or self.embed_dim < 1 or self.heads < 1:
            raise ValueError("hidden_dim, embed_dim and heads must be positive")
        if self.hidden_dim % self.heads:
            raise ValueError(f"hidden_dim {self.hidden_dim} is not divisible by {self.heads} heads")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "arch": self.arch,
            "layers": self.layers,
            "hidden_dim": self.hidden_dim,
            "heads": self.heads,
            "embed_dim": self.embed_dim,
            "dropout": self.dropout,
            "in_features": self.in_features,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelConfig":
        _check_keys(cls, data)
        config = cls(**data)
        config.validate()
        return config


@dataclass
class TrainConfig:
    """PPO hyperparameters. Defaults are the published training protocol."""
    total_steps: int = 50_000
    gamma: float = 0.99
    gae_lambda: float = 0.95
    clip_eps: float = 0.2
    value_coef: float = 0.5
    entropy_coef: float = 0.01
    epochs: int = 4
    minibatch: int = 32
    lr: float = 3e-4
    max_grad_norm: float = 0.5
    episodes_per_update: int = 4
    seed: int = 0
    normalize_advantages: bool = True
    eval_interval: int = 2_000
    eval_episodes: int = 10
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8

    def validate(self) -> None:
        if self.total_steps < 1:
            raise ValueError(f"total_steps must be >= 1, got {self.total_steps}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ValueError(f"gae_lambda must be in [0, 1], got {self.gae_lambda}")
        if self.clip_eps <= 0:
            raise ValueError(f"clip_eps must be positive, got {self.clip_eps}")
        if self.value_coef < 0 or self.entropy_coef < 0:
            raise ValueError("loss coefficients must be non-negative")
        if self.epochs < 1 or self.minibatch < 1 or self.episodes_per_update < 1:
            raise ValueError("epochs, minibatch and episodes_per_update must be >= 1")
        if self.lr <= 0 or self.max_grad_norm <= 0:
            raise ValueError("lr and max_grad_norm must be positive")
        if self.eval_interval < 1 or self.eval_episodes < 1:
            raise ValueError("eval_interval and eval_episodes must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "total_steps": self.total_steps,
            "gamma": self.gamma,
            "gae_lambda": self.gae_lambda,
            "clip_eps": self.clip_eps,
            "value_coef": self.value_coef,
            "entropy_coef": self.entropy_coef,
            "epochs": self.epochs,
            "minibatch": self.minibatch,
            "lr": self.lr,
            "max_grad_norm": self.max_grad_norm,
            "episodes_per_update": self.episodes_per_update,
            "seed": self.seed,
            "normalize_advantages": self.normalize_advantages,
            "eval_interval": self.eval_interval,
            "eval_episodes": self.eval_episodes,
            "adam_betas": list(self.adam_betas),
            "adam_eps": self.adam_eps,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        _check_keys(cls, data)
        data = dict(data)
        if "adam_betas" in data:
            data["adam_betas"] = tuple(data["adam_betas"])
        config = cls(**data)
        config.validate()
        return config


@dataclass
class EvalConfig:
    """Evaluation protocol."""
    episodes: int = 50
    reference_arch: str = "hgt"

    def to_dict(self) -> dict[str, Any]:
        return {"episodes": self.episodes, "reference_arch": self.reference_arch}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EvalConfig":
        _check_keys(cls, data)
        return cls(**data)


@dataclass
class Config:
    """Main configuration."""
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)

    # Experiment protocol
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    ablation_layers: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    ablation_seeds: list[int] = field(default_factory=lambda: [0, 1, 2])

    # Output root and worker pool (0 = one worker per seed)
    out_dir: str = "runs"
    workers: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model.to_dict(),
            "train": self.train.to_dict(),
            "eval": self.eval.to_dict(),
            "seeds": list(self.seeds),
            "ablation_layers": list(self.ablation_layers),
            "ablation_seeds": list(self.ablation_seeds),
            "out_dir": self.out_dir,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Config":
        _check_keys(cls, data)
        defaults = cls()
        return cls(
            model=ModelConfig.from_dict(data.get("model", {})),
            train=TrainConfig.from_dict(data.get("train", {})),
            eval=EvalConfig.from_dict(data.get("eval", {})),
            seeds=list(data.get("seeds", defaults.seeds)),
            ablation_layers=list(data.get("ablation_layers", defaults.ablation_layers)),
            ablation_seeds=list(data.get("ablation_seeds", defaults.ablation_seeds)),
            out_dir=data.get("out_dir", defaults.out_dir),
            workers=data.get("workers", defaults.workers),
        )


DEFAULT_CONFIG = Config()
