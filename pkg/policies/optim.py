"""Gradient computation and the clipped Adam update."""

import torch
from torch import Tensor, nn


class AutodiffError(RuntimeError):
    """Backward was requested for a value with no recorded computation."""


class NonFiniteGradientError(RuntimeError):
    """A gradient contains NaN or infinity."""


def backward(loss: Tensor, model: nn.Module) -> dict[str, Tensor]:
    """Populate ``.grad`` for every parameter and return them by name.

    The recorded graph is released afterwards.

    Raises:
        AutodiffError: ``loss`` is not a scalar produced by a recorded forward
    """
    if loss.numel() != 1:
        raise AutodiffError(f"backward needs a scalar loss, got shape {tuple(loss.shape)}")
    if loss.grad_fn is None:
        raise AutodiffError("loss has no recorded computation graph (was it detached or already released?)")
    loss.backward()
    return {
        name: (p.grad if p.grad is not None else torch.zeros_like(p))
        for name, p in model.named_parameters()
    }


def make_optimizer(
    model: nn.Module,
    lr: float = 3e-4,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> torch.optim.Adam:
    return torch.optim.Adam(model.parameters(), lr=lr, betas=betas, eps=eps)


def check_finite_gradients(model: nn.Module) -> None:
    bad = [
        name for name, p in model.named_parameters()
        if p.grad is not None and not torch.isfinite(p.grad).all()
    ]
    if bad:
        raise NonFiniteGradientError(f"non-finite gradients in {len(bad)} parameter(s): {', '.join(bad)}")


def clip_gradients(model: nn.Module, max_grad_norm: float) -> float:
    """Scale gradients so their global L2 norm is at most ``max_grad_norm``; returns the pre-clip norm."""
    params = [p for p in model.parameters() if p.grad is not None]
    if not params:
        return 0.0
    norm = torch.nn.utils.clip_grad_norm_(params, max_grad_norm)
    return float(norm)


def adam_step(model: nn.Module, optimizer: torch.optim.Optimizer, max_grad_norm: float = 0.5) -> float:
    """Check, clip and apply the current gradients, then clear them.

    Returns the pre-clip gradient norm.

    Raises:
        NonFiniteGradientError: a gradient holds NaN/Inf (nothing is updated)
    """
    check_finite_gradients(model)
    norm = clip_gradients(model, max_grad_norm)
    optimizer.step()
    optimizer.zero_grad(set_to_none=True)
    return norm


def optimizer_steps(optimizer: torch.optim.Optimizer) -> int:
    """Number of updates applied so far (Adam's per-parameter step counter)."""
    for state in optimizer.state.values():
        if "step" in state:
            return int(state["step"])
    return 0
