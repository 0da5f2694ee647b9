"""Exact optimum for tiny instances by depth-first search over dispatch sequences.

Every semi-active schedule the environment can build is reachable, and the set
contains an optimal active schedule, so the search returns the true optimum.
Branches whose lower bound already reaches the incumbent are cut.
"""

import logging
import math

import numpy as np

from env.state import ScheduleState, action_mask, lower_bound, makespan, reset, step
from instances import JsspInstance

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000
MAX_BRUTE_FORCE_OPS = 16


class BudgetExceededError(RuntimeError):
    """The search visited more states than its node budget allows."""


class InstanceTooLargeError(ValueError):
    """The instance is beyond what exhaustive search is meant for."""


def sequence_count(inst: JsspInstance) -> int:
    """Number of distinct dispatch sequences: (n*m)! / (m!)^n."""
    return math.factorial(inst.n_ops) // math.factorial(inst.n_machines) ** inst.n_jobs


def brute_force_optimal(
    inst: JsspInstance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    prune: bool = True,
) -> tuple[int, list[int]]:
    """Return (optimal makespan, witness sequence).

    With ``prune=False`` every sequence is enumerated (used as an oracle for
    the pruned search).

    Raises:
        BudgetExceededError: more than ``node_budget`` states were expanded
    """
    best = math.inf
    best_sequence: list[int] = []
    visited = 0
    sequence: list[int] = []

    def search(state: ScheduleState) -> None:
        nonlocal best, best_sequence, visited
        visited += 1
        if visited > node_budget:
            raise BudgetExceededError(
                f"{inst.name}: node budget {node_budget} exhausted (incumbent {best})"
            )
        if state.done:
            value = makespan(state)
            if value < best:
                best, best_sequence = value, list(sequence)
            return
        if prune and lower_bound(state, inst) >= best:
            return
        for action in np.flatnonzero(action_mask(state, inst)):
            child, _, _ = step(state, int(action), inst)
            sequence.append(int(action))
            search(child)
            sequence.pop()

    search(reset(inst))
    logger.debug("%s: optimum %s after %d states (prune=%s)", inst.name, best, visited, prune)
    return int(best), best_sequence


def check_solvable(inst: JsspInstance, max_ops: int = MAX_BRUTE_FORCE_OPS) -> None:
    if inst.n_ops > max_ops:
        raise InstanceTooLargeError(
            f"{inst.name} has {inst.n_ops} operations; exhaustive search is limited to {max_ops}"
        )
