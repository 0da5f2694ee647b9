"""Non-learning dispatchers and the exact oracle for tiny instances."""

from .base import DispatchRule, RuleKind
from .brute_force import (
    BudgetExceededError,
    InstanceTooLargeError,
    brute_force_optimal,
    check_solvable,
    sequence_count,
)
from .registry import get_selector, list_selectors, register
from .rules import dispatch, evaluate_rule

__all__ = [
    "BudgetExceededError",
    "DispatchRule",
    "InstanceTooLargeError",
    "RuleKind",
    "brute_force_optimal",
    "check_solvable",
    "dispatch",
    "evaluate_rule",
    "get_selector",
    "list_selectors",
    "register",
    "sequence_count",
]
