"""Greedy policy evaluation and multi-seed aggregation."""

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import torch

from env.jssp_env import JsspEnv
from instances import JsspInstance
from policies import PolicyModel

logger = logging.getLogger(__name__)


def optimality_gap(mean: float, optimum: int | None) -> float | None:
    """Percentage above the known optimum, or None when it is unknown."""
    if optimum is None:
        return None
    return 100.0 * (mean - optimum) / optimum


def greedy_rollout(model: PolicyModel, inst: JsspInstance, env: JsspEnv | None = None) -> tuple[int, list[int]]:
    """One argmax episode; returns (makespan, chosen node ids)."""
    env = env or JsspEnv(inst)
    model.eval()
    obs, _ = env.reset()
    actions: list[int] = []
    done = False
    info: dict[str, Any] = {}
    while not done:
        with torch.no_grad():
            out = model(env.graph, torch.as_tensor(obs["action_mask"]))
        action = out.greedy()
        actions.append(action)
        obs, _, done, _, info = env.step(action)
    return int(info["makespan"]), actions


def evaluate(model: PolicyModel, inst: JsspInstance, episodes: int = 50) -> list[int]:
    """Makespans of ``episodes`` greedy rollouts with dropout disabled.

    The environment and the greedy policy are both deterministic, so every
    entry is the same; spread in reported results comes from training seeds.
    """
    if episodes < 1:
        raise ValueError(f"episodes must be >= 1, got {episodes}")
    was_training = model.training
    env = JsspEnv(inst)
    makespans = [greedy_rollout(model, inst, env)[0] for _ in range(episodes)]
    model.train(was_training)
    logger.debug("evaluated %s on %s: %s", model.arch.label, inst.name, makespans[0])
    return makespans


@dataclass
class EvalResult:
    """Makespans of one method on one instance, grouped by seed."""
    instance: str
    method: str
    makespans: list[list[float]]
    seeds: list[int] = field(default_factory=list)
    known_optimum: int | None = None

    def __post_init__(self) -> None:
        if not self.makespans or any(len(m) == 0 for m in self.makespans):
            raise ValueError(f"{self.method} on {self.instance}: every seed needs at least one makespan")
        if not self.seeds:
            self.seeds = list(range(len(self.makespans)))
        if len(self.seeds) != len(self.makespans):
            raise ValueError("seeds and makespans must have the same length")

    @classmethod
    def from_makespans(
        cls,
        instance: str,
        method: str,
        per_seed: dict[int, Sequence[float]] | Sequence[Sequence[float]],
        known_optimum: int | None = None,
    ) -> "EvalResult":
        if isinstance(per_seed, dict):
            seeds = sorted(per_seed)
            makespans = [[float(x) for x in per_seed[s]] for s in seeds]
        else:
            seeds = list(range(len(per_seed)))
            makespans = [[float(x) for x in row] for row in per_seed]
        return cls(instance, method, makespans, seeds, known_optimum)

    def restrict(self, seeds: Sequence[int]) -> "EvalResult | None":
        """The same result limited to ``seeds``; None when no seed overlaps."""
        wanted = set(seeds)
        keep = [i for i, s in enumerate(self.seeds) if s in wanted]
        if not keep:
            return None
        return EvalResult(
            self.instance, self.method, [self.makespans[i] for i in keep],
            [self.seeds[i] for i in keep], self.known_optimum,
        )

    @property
    def seed_means(self) -> np.ndarray:
        return np.array([np.mean(m) for m in self.makespans], dtype=np.float64)

    @property
    def mean(self) -> float:
        return float(self.seed_means.mean())

    @property
    def std(self) -> float:
        """Sample std (n-1) of the per-seed means; 0 for a single seed."""
        means = self.seed_means
        return float(means.std(ddof=1)) if len(means) > 1 else 0.0

    @property
    def gap(self) -> float | None:
        return optimality_gap(self.mean, self.known_optimum)

    @property
    def gap_std(self) -> float | None:
        if self.known_optimum is None:
            return None
        return 100.0 * self.std / self.known_optimum

    @property
    def episodes(self) -> int:
        return len(self.makespans[0])

    def to_row(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "method": self.method,
            "n_seeds": len(self.seeds),
            "episodes": self.episodes,
            "mean": self.mean,
            "std": self.std,
            "gap_pct": self.gap,
            "gap_std": self.gap_std,
            "known_optimum": self.known_optimum,
        }
