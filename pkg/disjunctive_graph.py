"""Heterogeneous disjunctive graph over operation nodes.

One node type (``op``) and two relations:

- ``precedes``: directed arc (i, j) -> (i, j+1) inside a job
- ``competes``: every pair of operations sharing a machine, stored as two
  opposite directed arcs so both relations aggregate over incoming arcs

Arc lists use the ``edge_index`` convention: an int64 array of shape (2, E),
row 0 holding sources and row 1 destinations.
"""

from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
import pandas as pd
import torch

from env.state import ScheduleState, reset
from instances import JsspInstance, max_processing_time

RELATIONS = ("precedes", "competes")
FEATURE_DIM = 3


@dataclass
class HeteroGraph:
    """Static topology plus the per-step node feature matrix."""
    n_jobs: int
    n_machines: int
    precedes: np.ndarray
    competes: np.ndarray
    machine_of: np.ndarray
    features: np.ndarray
    _edge_cache: dict[str, torch.Tensor] = field(default_factory=dict, repr=False, compare=False)

    @property
    def node_count(self) -> int:
        return self.n_jobs * self.n_machines

    def node_id(self, job: int, pos: int) -> int:
        return job * self.n_machines + pos

    def op_of(self, node: int) -> tuple[int, int]:
        return divmod(int(node), self.n_machines)

    def edge_index_dict(self) -> dict[str, torch.Tensor]:
        """Relation name -> LongTensor[2, E]; cached since topology never changes."""
        if not self._edge_cache:
            self._edge_cache["precedes"] = torch.as_tensor(self.precedes, dtype=torch.long)
            self._edge_cache["competes"] = torch.as_tensor(self.competes, dtype=torch.long)
        return dict(self._edge_cache)

    def merged_edge_index(self) -> torch.Tensor:
        """Both relations as one untyped arc set."""
        edges = self.edge_index_dict()
        return torch.cat([edges["precedes"], edges["competes"]], dim=1)

    def feature_tensor(self) -> torch.Tensor:
        return torch.as_tensor(self.features, dtype=torch.float64)

    def permute(self, perm: np.ndarray) -> "RelabeledGraph":
        """Relabel node ``v`` as ``perm[v]``; arcs and features follow."""
        return RelabeledGraph.from_graph(self, np.asarray(perm, dtype=np.int64))

    def to_frames(self) -> tuple[pd.DataFrame, pd.DataFrame]:
        """(node table, arc table) for debugging."""
        nodes = np.arange(self.node_count)
        jobs, positions = np.divmod(nodes, self.n_machines)
        node_frame = pd.DataFrame({
            "id": nodes,
            "job": jobs,
            "pos": positions,
            "machine": self.machine_of.reshape(-1),
            "f0": self.features[:, 0],
            "f1": self.features[:, 1],
            "f2": self.features[:, 2],
        })
        arc_frame = pd.concat([
            pd.DataFrame({"relation": rel, "src": arcs[0], "dst": arcs[1]})
            for rel, arcs in (("precedes", self.precedes), ("competes", self.competes))
        ], ignore_index=True)
        return node_frame, arc_frame

    def dump_csv(self, directory: str | Path) -> tuple[Path, Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        node_frame, arc_frame = self.to_frames()
        node_path, arc_path = directory / "nodes.csv", directory / "arcs.csv"
        node_frame.to_csv(node_path, index=False)
        arc_frame.to_csv(arc_path, index=False)
        return node_path, arc_path


@dataclass
class RelabeledGraph:
    """Graph view with arbitrary node ids; used to check permutation equivariance."""
    precedes: np.ndarray
    competes: np.ndarray
    features: np.ndarray

    @classmethod
    def from_graph(cls, graph: HeteroGraph, perm: np.ndarray) -> "RelabeledGraph":
        features = np.empty_like(graph.features)
        features[perm] = graph.features
        return cls(perm[graph.precedes], perm[graph.competes], features)

    @property
    def node_count(self) -> int:
        return int(self.features.shape[0])

    def edge_index_dict(self) -> dict[str, torch.Tensor]:
        return {
            "precedes": torch.as_tensor(self.precedes, dtype=torch.long),
            "competes": torch.as_tensor(self.competes, dtype=torch.long),
        }

    def merged_edge_index(self) -> torch.Tensor:
        edges = self.edge_index_dict()
        return torch.cat([edges["precedes"], edges["competes"]], dim=1)

    def feature_tensor(self) -> torch.Tensor:
        return torch.as_tensor(self.features, dtype=torch.float64)


def build_graph(inst: JsspInstance) -> HeteroGraph:
    n, m = inst.n_jobs, inst.n_machines
    ids = np.arange(n * m).reshape(n, m)

    precedes = np.stack([ids[:, :-1].reshape(-1), ids[:, 1:].reshape(-1)])

    competes_arcs: list[tuple[int, int]] = []
    for machine in range(m):
        ops_on_machine = ids[inst.machine_of == machine]
        competes_arcs.extend(permutations(ops_on_machine.tolist(), 2))
    competes = np.array(competes_arcs, dtype=np.int64).reshape(-1, 2).T

    graph = HeteroGraph(
        n_jobs=n,
        n_machines=m,
        precedes=precedes.astype(np.int64),
        competes=competes,
        machine_of=inst.machine_of.copy(),
        features=np.zeros((n * m, FEATURE_DIM), dtype=np.float64),
    )
    update_features(graph, reset(inst), inst)
    return graph


def update_features(graph: HeteroGraph, state: ScheduleState, inst: JsspInstance) -> None:
    """Recompute the full feature matrix in place.

    f0: processing time / instance max; f1: completion / global time (0 if
    unscheduled); f2: scheduled flag. Global time is the latest completion
    among scheduled operations.
    """
    scheduled = state.op_scheduled.reshape(-1)
    completion = state.op_completion.reshape(-1).astype(np.float64)
    global_time = completion[scheduled].max() if scheduled.any() else 0.0

    features = graph.features
    features[:, 0] = inst.proc_time.reshape(-1) / max_processing_time(inst)
    features[:, 1] = 0.0
    if global_time > 0:
        features[scheduled, 1] = completion[scheduled] / global_time
    features[:, 2] = scheduled.astype(np.float64)
