"""Graph policies (HGT, Homo-HGT, GIN), optimisation helpers and checkpoints."""

from .base import (
    Arch,
    EmptyMaskError,
    PolicyModel,
    PolicyOutput,
    build_policy,
    count_parameters,
    forward,
    parameter_breakdown,
    register_arch,
    relation_projection_size,
)
from .checkpoint import Checkpoint, CheckpointError, load_checkpoint, save_checkpoint
from .layers import GINLayer, HGTLayer, mlp
from .optim import (
    AutodiffError,
    NonFiniteGradientError,
    adam_step,
    backward,
    check_finite_gradients,
    clip_gradients,
    make_optimizer,
    optimizer_steps,
)

__all__ = [
    "Arch",
    "AutodiffError",
    "Checkpoint",
    "CheckpointError",
    "EmptyMaskError",
    "GINLayer",
    "HGTLayer",
    "NonFiniteGradientError",
    "PolicyModel",
    "PolicyOutput",
    "adam_step",
    "backward",
    "build_policy",
    "check_finite_gradients",
    "clip_gradients",
    "count_parameters",
    "forward",
    "load_checkpoint",
    "make_optimizer",
    "mlp",
    "optimizer_steps",
    "parameter_breakdown",
    "register_arch",
    "relation_projection_size",
    "save_checkpoint",
]
