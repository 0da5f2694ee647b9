"""Proximal policy optimisation for the graph policies."""

from .buffer import RolloutBuffer, Transition, compute_gae, gae
from .trainer import (
    CurvePoint,
    LossParts,
    NonFiniteLossError,
    TrainResult,
    collect_rollout,
    ppo_loss,
    ppo_update,
    train,
)

__all__ = [
    "CurvePoint",
    "LossParts",
    "NonFiniteLossError",
    "RolloutBuffer",
    "TrainResult",
    "Transition",
    "collect_rollout",
    "compute_gae",
    "gae",
    "ppo_loss",
    "ppo_update",
    "train",
]
