"""Gymnasium wrapper around the scheduling MDP.

Observations are the graph's feature matrix plus the action mask; the static
topology is available through ``env.graph``.
"""

from typing import Any

import gymnasium as gym
import numpy as np
from gymnasium import spaces

from disjunctive_graph import FEATURE_DIM, HeteroGraph, build_graph, update_features
from instances import JsspInstance

from .state import ScheduleState, action_mask, lower_bound, makespan, reset, step


class JsspEnv(gym.Env):
    """One job-shop episode per reset; exactly n*m steps per episode."""

    metadata = {"render_modes": []}

    def __init__(self, inst: JsspInstance) -> None:
        super().__init__()
        self.inst = inst
        self.graph: HeteroGraph = build_graph(inst)
        n_ops = inst.n_ops
        self.action_space = spaces.Discrete(n_ops)
        self.observation_space = spaces.Dict({
            "features": spaces.Box(0.0, 1.0, shape=(n_ops, FEATURE_DIM), dtype=np.float64),
            "action_mask": spaces.MultiBinary(n_ops),
        })
        self.state: ScheduleState = reset(inst)

    def _observation(self) -> dict[str, np.ndarray]:
        return {
            "features": self.graph.features.copy(),
            "action_mask": action_mask(self.state, self.inst),
        }

    def _info(self) -> dict[str, Any]:
        return {
            "lower_bound": self.state.prev_lower_bound,
            "steps_taken": self.state.steps_taken,
        }

    def reset(
        self, *, seed: int | None = None, options: dict[str, Any] | None = None
    ) -> tuple[dict[str, np.ndarray], dict[str, Any]]:
        super().reset(seed=seed)
        self.state = reset(self.inst)
        update_features(self.graph, self.state, self.inst)
        return self._observation(), self._info()

    def step(self, action: int) -> tuple[dict[str, np.ndarray], float, bool, bool, dict[str, Any]]:
        self.state, reward, done = step(self.state, action, self.inst)
        update_features(self.graph, self.state, self.inst)
        info = self._info()
        if done:
            info["makespan"] = makespan(self.state)
        return self._observation(), reward, done, False, info

    def action_masks(self) -> np.ndarray:
        return action_mask(self.state, self.inst)

    @property
    def lower_bound(self) -> int:
        return lower_bound(self.state, self.inst)
