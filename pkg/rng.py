"""Named random streams derived from a single run seed.

Weight init, action sampling, dropout and minibatch shuffling each draw from
their own stream so changing how often one is used never shifts the others.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
import torch

STREAM_NAMES = ("init", "sample", "dropout", "shuffle")


def _torch_generator(seed_seq: np.random.SeedSequence) -> torch.Generator:
    generator = torch.Generator()
    generator.manual_seed(int(seed_seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1)))
    return generator


@dataclass
class RngStreams:
    seed: int
    init: torch.Generator
    sample: torch.Generator
    shuffle: torch.Generator
    dropout_seed: int

    @classmethod
    def from_seed(cls, seed: int) -> "RngStreams":
        children = dict(zip(STREAM_NAMES, np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))))
        return cls(
            seed=seed,
            init=_torch_generator(children["init"]),
            sample=_torch_generator(children["sample"]),
            shuffle=_torch_generator(children["shuffle"]),
            dropout_seed=int(children["dropout"].generate_state(1)[0]),
        )

    def seed_dropout(self) -> None:
        """Seed torch's global stream, which dropout draws from."""
        torch.manual_seed(self.dropout_seed)

    def state_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "init": self.init.get_state(),
            "sample": self.sample.get_state(),
            "shuffle": self.shuffle.get_state(),
            "dropout": torch.get_rng_state(),
        }

    def load_state_dict(self, state: dict[str, Any]) -> None:
        self.init.set_state(state["init"])
        self.sample.set_state(state["sample"])
        self.shuffle.set_state(state["shuffle"])
        torch.set_rng_state(state["dropout"])
