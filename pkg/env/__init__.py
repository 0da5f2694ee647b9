"""Scheduling environment.

The Gymnasium wrapper lives in ``env.jssp_env`` (it depends on the graph
module, which itself builds on ``env.state``).
"""

from .state import (
    STEP_PENALTY,
    InvalidActionError,
    NotTerminalError,
    ScheduleState,
    action_mask,
    export_schedule_csv,
    is_feasible,
    lower_bound,
    makespan,
    reset,
    run_sequence,
    schedule_frame,
    step,
)

__all__ = [
    "STEP_PENALTY",
    "InvalidActionError",
    "NotTerminalError",
    "ScheduleState",
    "action_mask",
    "export_schedule_csv",
    "is_feasible",
    "lower_bound",
    "makespan",
    "reset",
    "run_sequence",
    "schedule_frame",
    "step",
]
