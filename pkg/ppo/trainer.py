"""PPO: rollout collection, clipped-surrogate updates and the training loop."""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import torch
from torch import Tensor

from config import ModelConfig, TrainConfig
from env.jssp_env import JsspEnv
from evaluation.evaluate import evaluate, optimality_gap
from instances import JsspInstance
from policies import (
    PolicyModel,
    adam_step,
    backward,
    build_policy,
    make_optimizer,
    save_checkpoint,
)
from rng import RngStreams

from .buffer import RolloutBuffer, Transition, compute_gae

logger = logging.getLogger(__name__)


class NonFiniteLossError(RuntimeError):
    """The PPO loss became NaN or infinite."""


@dataclass
class LossParts:
    total: Tensor
    policy: Tensor
    value: Tensor
    entropy: Tensor
    approx_kl: float
    clip_fraction: float

    def is_finite(self) -> bool:
        return bool(torch.isfinite(self.total))

    def describe(self) -> str:
        return (
            f"total={self.total.item():.6g} policy={self.policy.item():.6g} "
            f"value={self.value.item():.6g} entropy={self.entropy.item():.6g}"
        )


@dataclass
class CurvePoint:
    env_steps: int
    eval_mean: float
    eval_std: float
    gap: float | None = None


@dataclass
class TrainResult:
    model: PolicyModel
    curve: list[CurvePoint]
    env_steps: int
    updates: int
    checkpoint_path: Path | None = None
    stats: list[dict[str, float]] = field(default_factory=list)


def collect_rollout(
    env: JsspEnv,
    model: PolicyModel,
    generator: torch.Generator,
    episodes: int = 4,
) -> RolloutBuffer:
    """Sample ``episodes`` complete episodes from the masked policy (train mode)."""
    model.train()
    buffer = RolloutBuffer()
    for _ in range(episodes):
        obs, _ = env.reset()
        done = False
        while not done:
            mask = obs["action_mask"]
            with torch.no_grad():
                out = model(env.graph, torch.as_tensor(mask))
            action = out.sample(generator)
            next_obs, reward, done, _, info = env.step(action)
            buffer.add(Transition(
                features=obs["features"],
                mask=mask,
                action=action,
                log_prob=float(out.log_probs[action]),
                reward=reward,
                value=float(out.value),
                done=done,
            ))
            obs = next_obs
        buffer.episode_makespans.append(int(info["makespan"]))
    return buffer


def ppo_loss(
    new_log_probs: Tensor,
    old_log_probs: Tensor,
    advantages: Tensor,
    new_values: Tensor,
    old_values: Tensor,
    returns: Tensor,
    entropies: Tensor,
    clip_eps: float = 0.2,
    value_coef: float = 0.5,
    entropy_coef: float = 0.01,
) -> LossParts:
    """Clipped surrogate + clipped value loss - entropy bonus, averaged over the batch."""
    log_ratio = new_log_probs - old_log_probs
    ratio = torch.exp(log_ratio)
    unclipped = ratio * advantages
    clipped = torch.clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantages
    policy_loss = -torch.min(unclipped, clipped).mean()

    values_clipped = old_values + torch.clamp(new_values - old_values, -clip_eps, clip_eps)
    value_loss = torch.max((new_values - returns) ** 2, (values_clipped - returns) ** 2).mean()

    entropy = entropies.mean()
    total = policy_loss + value_coef * value_loss - entropy_coef * entropy

    with torch.no_grad():
        approx_kl = float(((ratio - 1.0) - log_ratio).mean())
        clip_fraction = float(((ratio - 1.0).abs() > clip_eps).double().mean())
    return LossParts(total, policy_loss, value_loss, entropy, approx_kl, clip_fraction)


def ppo_update(
    model: PolicyModel,
    optimizer: torch.optim.Optimizer,
    buffer: RolloutBuffer,
    env: JsspEnv,
    config: TrainConfig,
    generator: torch.Generator,
) -> dict[str, float]:
    """``config.epochs`` passes over shuffled minibatches, one Adam step each.

    Raises:
        NonFiniteLossError: the loss of a minibatch is NaN/Inf
    """
    if buffer.advantages is None or buffer.returns is None:
        raise ValueError("compute_gae must run before ppo_update")
    model.train()
    graph = env.graph
    advantages = torch.as_tensor(buffer.advantages, dtype=torch.float64)
    returns = torch.as_tensor(buffer.returns, dtype=torch.float64)
    old_log_probs = torch.tensor([t.log_prob for t in buffer.transitions], dtype=torch.float64)
    old_values = torch.as_tensor(buffer.values, dtype=torch.float64)

    history: list[LossParts] = []
    n = len(buffer)
    for _ in range(config.epochs):
        order = torch.randperm(n, generator=generator)
        for start in range(0, n, config.minibatch):
            idx = order[start:start + config.minibatch]
            new_log_probs, new_values, entropies = [], [], []
            for i in idx.tolist():
                t = buffer.transitions[i]
                out = model(graph, torch.as_tensor(t.mask), features=t.features)
                new_log_probs.append(out.log_probs[t.action])
                new_values.append(out.value)
                entropies.append(out.entropy())

            parts = ppo_loss(
                torch.stack(new_log_probs), old_log_probs[idx], advantages[idx],
                torch.stack(new_values), old_values[idx], returns[idx], torch.stack(entropies),
                clip_eps=config.clip_eps, value_coef=config.value_coef, entropy_coef=config.entropy_coef,
            )
            if not parts.is_finite():
                raise NonFiniteLossError(f"non-finite PPO loss ({parts.describe()})")
            backward(parts.total, model)
            adam_step(model, optimizer, config.max_grad_norm)
            history.append(parts)

    return {
        "policy_loss": float(np.mean([p.policy.item() for p in history])),
        "value_loss": float(np.mean([p.value.item() for p in history])),
        "entropy": float(np.mean([p.entropy.item() for p in history])),
        "approx_kl": float(np.mean([p.approx_kl for p in history])),
        "clip_fraction": float(np.mean([p.clip_fraction for p in history])),
    }


def train(
    inst: JsspInstance,
    model_config: ModelConfig,
    config: TrainConfig,
    checkpoint_path: str | Path | None = None,
    on_curve_point: Callable[[CurvePoint], None] | None = None,
) -> TrainResult:
    """Collect -> GAE -> update until ``config.total_steps`` environment steps.

    A greedy evaluation is appended to the learning curve each time the step
    count crosses a multiple of ``config.eval_interval`` and once at the end.
    """
    config.validate()
    model_config.validate()
    streams = RngStreams.from_seed(config.seed)
    streams.seed_dropout()
    model = build_policy(model_config, streams.init)
    optimizer = make_optimizer(model, config.lr, config.adam_betas, config.adam_eps)
    env = JsspEnv(inst)

    def record(steps: int) -> None:
        makespans = evaluate(model, inst, config.eval_episodes)
        mean = float(np.mean(makespans))
        point = CurvePoint(steps, mean, float(np.std(makespans)), optimality_gap(mean, inst.known_optimum))
        curve.append(point)
        logger.info("[%s %s seed=%d] step %d: eval makespan %.1f",
                    inst.name, model_config.arch, config.seed, steps, point.eval_mean)
        if on_curve_point is not None:
            on_curve_point(point)

    curve: list[CurvePoint] = []
    stats: list[dict[str, float]] = []
    steps, updates = 0, 0
    next_eval = config.eval_interval
    started = time.time()

    while steps < config.total_steps:
        buffer = collect_rollout(env, model, streams.sample, config.episodes_per_update)
        steps += len(buffer)
        compute_gae(buffer, config.gamma, config.gae_lambda, config.normalize_advantages)
        update_stats = ppo_update(model, optimizer, buffer, env, config, streams.shuffle)
        update_stats["rollout_makespan"] = float(np.mean(buffer.episode_makespans))
        stats.append(update_stats)
        updates += 1
        logger.debug("update %d: %s", updates, update_stats)

        if steps >= next_eval:
            record(steps)
            while next_eval <= steps:
                next_eval += config.eval_interval

    if not curve or curve[-1].env_steps != steps:
        record(steps)
    logger.info("[%s %s seed=%d] %d updates, %d steps in %.1fs",
                inst.name, model_config.arch, config.seed, updates, steps, time.time() - started)

    saved = None
    if checkpoint_path is not None:
        saved = save_checkpoint(
            checkpoint_path, model, optimizer, streams.state_dict(), steps,
            metadata={"instance": inst.name, "seed": config.seed, "updates": updates},
        )
    return TrainResult(model, curve, steps, updates, saved, stats)
