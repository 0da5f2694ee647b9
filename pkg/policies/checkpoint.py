"""Versioned checkpoint container (torch.save of a plain dict)."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import torch

from config import ModelConfig

from .base import PolicyModel, build_policy

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class CheckpointError(RuntimeError):
    """A checkpoint could not be written or read."""


@dataclass
class Checkpoint:
    model: PolicyModel
    optimizer_state: dict[str, Any] | None
    rng_state: dict[str, Any] | None
    steps_trained: int
    metadata: dict[str, Any]


def save_checkpoint(
    path: str | Path,
    model: PolicyModel,
    optimizer: torch.optim.Optimizer | None = None,
    rng_state: dict[str, Any] | None = None,
    steps_trained: int = 0,
    metadata: dict[str, Any] | None = None,
) -> Path:
    path = Path(path)
    payload = {
        "format_version": FORMAT_VERSION,
        "arch": model.arch.value,
        "model_config": model.config.to_dict(),
        "state_dict": model.state_dict(),
        "optimizer": optimizer.state_dict() if optimizer is not None else None,
        "rng": rng_state,
        "steps_trained": steps_trained,
        "metadata": metadata or {},
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(payload, path)
    except OSError as e:
        raise CheckpointError(f"could not write checkpoint {path}: {e}") from e
    logger.info("Saved checkpoint %s (%s, %d steps)", path, model.arch.value, steps_trained)
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"checkpoint not found: {path}")
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise CheckpointError(f"could not read checkpoint {path}: {e}") from e

    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint format {version!r} (expected {FORMAT_VERSION})")

    model = build_policy(ModelConfig.from_dict(payload["model_config"]))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return Checkpoint(
        model=model,
        optimizer_state=payload["optimizer"],
        rng_state=payload["rng"],
        steps_trained=int(payload["steps_trained"]),
        metadata=payload["metadata"],
    )
