"""Selector registry keyed by rule kind."""

from typing import Callable

from .base import RuleKind, Selector

_selectors: dict[RuleKind, Selector] = {}


def register(kind: RuleKind) -> Callable[[Selector], Selector]:
    """Decorator registering a selector for ``kind``.

    Usage:
        @register(RuleKind.SPT)
        def shortest(eligible, inst, rng): ...
    """
    def decorator(func: Selector) -> Selector:
        if kind in _selectors:
            raise ValueError(f"Selector for '{kind.value}' is already registered")
        _selectors[kind] = func
        return func
    return decorator


def get_selector(kind: RuleKind) -> Selector:
    try:
        return _selectors[kind]
    except KeyError:
        raise ValueError(f"No selector registered for '{kind.value}'") from None


def list_selectors() -> dict[RuleKind, Selector]:
    return _selectors.copy()
