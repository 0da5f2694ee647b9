"""Rollout storage and generalized advantage estimation."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Transition:
    """One decision: enough to replay the forward pass on the static graph."""
    features: np.ndarray
    mask: np.ndarray
    action: int
    log_prob: float
    reward: float
    value: float
    done: bool


@dataclass
class RolloutBuffer:
    """Transitions from complete episodes, in collection order."""
    transitions: list[Transition] = field(default_factory=list)
    advantages: np.ndarray | None = None
    returns: np.ndarray | None = None
    episode_makespans: list[int] = field(default_factory=list)

    def add(self, transition: Transition) -> None:
        self.transitions.append(transition)

    def __len__(self) -> int:
        return len(self.transitions)

    @property
    def episodes(self) -> int:
        return sum(t.done for t in self.transitions)

    @property
    def rewards(self) -> np.ndarray:
        return np.array([t.reward for t in self.transitions], dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return np.array([t.value for t in self.transitions], dtype=np.float64)

    @property
    def dones(self) -> np.ndarray:
        return np.array([t.done for t in self.transitions], dtype=np.float64)


def gae(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    gamma: float,
    gae_lambda: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Raw (unnormalised) advantages and returns.

    The value after a terminal step is 0; episodes never end by truncation.
    """
    n = len(rewards)
    advantages = np.zeros(n, dtype=np.float64)
    last = 0.0
    for t in reversed(range(n)):
        not_done = 1.0 - dones[t]
        next_value = values[t + 1] if t + 1 < n else 0.0
        delta = rewards[t] + gamma * next_value * not_done - values[t]
        last = delta + gamma * gae_lambda * not_done * last
        advantages[t] = last
    return advantages, advantages + values


def compute_gae(
    buffer: RolloutBuffer,
    gamma: float = 0.99,
    gae_lambda: float = 0.95,
    normalize: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Fill ``buffer.advantages`` / ``buffer.returns``.

    Returns are always computed from the raw advantages; normalisation to zero
    mean and unit std only affects the advantages used by the policy loss.
    """
    advantages, returns = gae(buffer.rewards, buffer.values, buffer.dones, gamma, gae_lambda)
    if normalize and len(advantages) > 1:
        advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)
    buffer.advantages, buffer.returns = advantages, returns
    return advantages, returns
