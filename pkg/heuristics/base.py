"""Dispatch rule description and the selector interface."""

from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import numpy as np

from instances import JsspInstance


class RuleKind(Enum):
    """Available non-learning dispatchers."""
    RANDOM = "random"
    SPT = "spt"
    LPT = "lpt"

    @classmethod
    def parse(cls, value: "str | RuleKind") -> "RuleKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"Unknown dispatch rule '{value}' (choose from {', '.join(k.value for k in cls)})"
            ) from None


@dataclass(frozen=True)
class DispatchRule:
    """A rule plus the seed used when it is stochastic."""
    kind: RuleKind
    seed: int = 0

    @property
    def deterministic(self) -> bool:
        return self.kind is not RuleKind.RANDOM

    @property
    def label(self) -> str:
        return self.kind.name.capitalize() if self.kind is RuleKind.RANDOM else self.kind.name


class Selector(Protocol):
    """Pick one node id among the eligible ones (listed in ascending job order)."""

    def __call__(self, eligible: np.ndarray, inst: JsspInstance, rng: np.random.Generator) -> int: ...
