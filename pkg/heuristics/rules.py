"""Random, SPT and LPT dispatching.

Ties between equal processing times go to the lowest job index.
"""

import numpy as np

from env.state import action_mask, makespan, reset, step
from instances import JsspInstance

from .base import DispatchRule, RuleKind
from .registry import get_selector, register


def _durations(eligible: np.ndarray, inst: JsspInstance) -> np.ndarray:
    return inst.proc_time.reshape(-1)[eligible]


@register(RuleKind.RANDOM)
def uniform_random(eligible: np.ndarray, inst: JsspInstance, rng: np.random.Generator) -> int:
    return int(eligible[rng.integers(len(eligible))])


@register(RuleKind.SPT)
def shortest_processing_time(eligible: np.ndarray, inst: JsspInstance, rng: np.random.Generator) -> int:
    # argmin returns the first minimum, i.e. the lowest job index
    return int(eligible[np.argmin(_durations(eligible, inst))])


@register(RuleKind.LPT)
def longest_processing_time(eligible: np.ndarray, inst: JsspInstance, rng: np.random.Generator) -> int:
    return int(eligible[np.argmax(_durations(eligible, inst))])


def dispatch(
    inst: JsspInstance, rule: DispatchRule, rng: np.random.Generator | None = None
) -> tuple[int, list[int]]:
    """Run one episode under ``rule``; returns (makespan, action sequence).

    ``rng`` overrides the rule's own seed so several stochastic episodes can
    share one stream.
    """
    selector = get_selector(rule.kind)
    rng = rng if rng is not None else np.random.default_rng(rule.seed)
    state = reset(inst)
    sequence: list[int] = []
    while not state.done:
        eligible = np.flatnonzero(action_mask(state, inst))
        action = selector(eligible, inst, rng)
        state, _, _ = step(state, action, inst)
        sequence.append(action)
    return makespan(state), sequence


def evaluate_rule(inst: JsspInstance, rule: DispatchRule, episodes: int) -> list[int]:
    """Makespans of ``episodes`` runs; deterministic rules repeat one value."""
    if rule.deterministic:
        value, _ = dispatch(inst, rule)
        return [value] * episodes
    rng = np.random.default_rng(rule.seed)
    return [dispatch(inst, rule, rng)[0] for _ in range(episodes)]
