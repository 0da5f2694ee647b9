"""Scheduling MDP: state, action mask, transition rule and lower bound.

Operation ``(i, j)`` (job ``i``, position ``j``) has node id ``i * m + j``.
All times are integers; only the per-step penalty is applied in floating point.
"""

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd

from instances import JsspInstance

STEP_PENALTY = 0.1


class InvalidActionError(ValueError):
    """An action that the mask does not allow was submitted."""


class NotTerminalError(RuntimeError):
    """A terminal-only query was made on an unfinished schedule."""


@dataclass
class ScheduleState:
    """Dynamic state of one episode.

    ``op_start`` / ``op_completion`` are -1 for unscheduled operations.
    """
    next_pos: np.ndarray
    op_scheduled: np.ndarray
    op_start: np.ndarray
    op_completion: np.ndarray
    machine_ready: np.ndarray
    job_ready: np.ndarray
    steps_taken: int = 0
    prev_lower_bound: int = 0

    @property
    def done(self) -> bool:
        return bool(self.op_scheduled.all())

    def copy(self) -> "ScheduleState":
        return replace(
            self,
            next_pos=self.next_pos.copy(),
            op_scheduled=self.op_scheduled.copy(),
            op_start=self.op_start.copy(),
            op_completion=self.op_completion.copy(),
            machine_ready=self.machine_ready.copy(),
            job_ready=self.job_ready.copy(),
        )


def reset(inst: JsspInstance) -> ScheduleState:
    n, m = inst.n_jobs, inst.n_machines
    state = ScheduleState(
        next_pos=np.zeros(n, dtype=np.int64),
        op_scheduled=np.zeros((n, m), dtype=bool),
        op_start=np.full((n, m), -1, dtype=np.int64),
        op_completion=np.full((n, m), -1, dtype=np.int64),
        machine_ready=np.zeros(m, dtype=np.int64),
        job_ready=np.zeros(n, dtype=np.int64),
    )
    state.prev_lower_bound = lower_bound(state, inst)
    return state


def action_mask(state: ScheduleState, inst: JsspInstance) -> np.ndarray:
    """Boolean vector over node ids: true for the first pending op of each unfinished job."""
    m = inst.n_machines
    mask = np.zeros(inst.n_ops, dtype=bool)
    unfinished = np.flatnonzero(state.next_pos < m)
    mask[unfinished * m + state.next_pos[unfinished]] = True
    return mask


def lower_bound(state: ScheduleState, inst: JsspInstance) -> int:
    """max(latest machine finish, max over jobs of last completion + pending work)."""
    m = inst.n_machines
    positions = np.arange(m)
    pending = positions[None, :] >= state.next_pos[:, None]
    job_term = state.job_ready + (inst.proc_time * pending).sum(axis=1)
    return int(max(state.machine_ready.max(), job_term.max()))


def step(state: ScheduleState, action: int, inst: JsspInstance) -> tuple[ScheduleState, float, bool]:
    """Schedule operation ``action`` at its earliest feasible start.

    Returns a new state; the input state is left untouched.

    Raises:
        InvalidActionError: the action is out of range or not eligible
    """
    m = inst.n_machines
    action = int(action)
    if not 0 <= action < inst.n_ops:
        raise InvalidActionError(f"action {action} outside 0..{inst.n_ops - 1}")
    job, pos = divmod(action, m)
    if state.next_pos[job] != pos:
        raise InvalidActionError(
            f"action {action} (job {job}, op {pos}) is masked; job {job} is at op {state.next_pos[job]}"
        )

    nxt = state.copy()
    machine = int(inst.machine_of[job, pos])
    start = int(max(nxt.job_ready[job], nxt.machine_ready[machine]))
    completion = start + int(inst.proc_time[job, pos])
    nxt.op_start[job, pos] = start
    nxt.op_completion[job, pos] = completion
    nxt.op_scheduled[job, pos] = True
    nxt.machine_ready[machine] = completion
    nxt.job_ready[job] = completion
    nxt.next_pos[job] += 1
    nxt.steps_taken += 1

    new_bound = lower_bound(nxt, inst)
    reward = float(state.prev_lower_bound - new_bound) - STEP_PENALTY
    nxt.prev_lower_bound = new_bound
    return nxt, reward, nxt.done


def makespan(state: ScheduleState) -> int:
    if not state.done:
        raise NotTerminalError(
            f"makespan requested after {state.steps_taken} of {state.op_scheduled.size} steps"
        )
    return int(state.op_completion.max())


def run_sequence(inst: JsspInstance, actions) -> tuple[ScheduleState, list[float]]:
    """Replay a dispatch sequence from reset; returns the final state and rewards."""
    state = reset(inst)
    rewards = []
    for action in actions:
        state, reward, _ = step(state, action, inst)
        rewards.append(reward)
    return state, rewards


def is_feasible(state: ScheduleState, inst: JsspInstance) -> bool:
    """Check job order, durations, machine exclusivity and step count."""
    scheduled = state.op_scheduled
    if state.steps_taken != int(scheduled.sum()):
        return False
    for i in range(inst.n_jobs):
        for j in range(inst.n_machines):
            if not scheduled[i, j]:
                continue
            if state.op_completion[i, j] != state.op_start[i, j] + inst.proc_time[i, j]:
                return False
            if j > 0 and (not scheduled[i, j - 1] or state.op_completion[i, j - 1] > state.op_start[i, j]):
                return False
    for k in range(inst.n_machines):
        on_machine = scheduled & (inst.machine_of == k)
        order = np.argsort(state.op_start[on_machine], kind="stable")
        starts = state.op_start[on_machine][order]
        ends = state.op_completion[on_machine][order]
        if (starts[1:] < ends[:-1]).any():
            return False
    return True


def schedule_frame(state: ScheduleState, inst: JsspInstance) -> pd.DataFrame:
    """Scheduled operations as (job, pos, machine, start, completion) rows."""
    jobs, positions = np.nonzero(state.op_scheduled)
    frame = pd.DataFrame({
        "job": jobs,
        "pos": positions,
        "machine": inst.machine_of[jobs, positions],
        "start": state.op_start[jobs, positions],
        "completion": state.op_completion[jobs, positions],
    })
    return frame.sort_values(["machine", "start"], kind="stable").reset_index(drop=True)


def export_schedule_csv(state: ScheduleState, inst: JsspInstance, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    schedule_frame(state, inst).to_csv(path, index=False)
    return path
