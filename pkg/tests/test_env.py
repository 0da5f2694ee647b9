"""Tests for the scheduling environment."""

import numpy as np
import pytest

from env import (
    STEP_PENALTY,
    InvalidActionError,
    NotTerminalError,
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
from env.jssp_env import JsspEnv
from instances import generate_random_instance

# ft06 operations in start-time order of a schedule with makespan 55
FT06_OPTIMAL = [
    0, 6, 12, 1, 13, 7, 18, 14, 8, 19, 30, 24, 31, 2, 15, 32, 20, 25,
    16, 21, 26, 9, 33, 3, 22, 34, 10, 4, 27, 23, 5, 17, 35, 11, 28, 29,
]


def random_episode(inst, seed):
    """Play uniformly random valid actions; returns (states, rewards)."""
    rng = np.random.default_rng(seed)
    state = reset(inst)
    states, rewards = [state], []
    while not state.done:
        action = int(rng.choice(np.flatnonzero(action_mask(state, inst))))
        state, reward, _ = step(state, action, inst)
        states.append(state)
        rewards.append(reward)
    return states, rewards


class TestReset:
    """Tests for the initial state."""

    def test_tiny(self, tiny):
        """Nothing scheduled; lower bound is the longest job."""
        state = reset(tiny)
        assert not state.done
        assert state.steps_taken == 0
        assert (state.op_start == -1).all()
        assert state.prev_lower_bound == 5
        assert action_mask(state, tiny).tolist() == [True, False, True, False]

    def test_lower_bound_is_max_total_work(self, ft06):
        """At reset the bound equals the largest job total."""
        assert lower_bound(reset(ft06), ft06) == int(ft06.proc_time.sum(axis=1).max())

    def test_ft06_mask(self, ft06):
        """First operations are valid at reset; scheduling (0, 0) unlocks (0, 1)."""
        state = reset(ft06)
        assert np.flatnonzero(action_mask(state, ft06)).tolist() == [0, 6, 12, 18, 24, 30]
        state, _, _ = step(state, 0, ft06)
        assert np.flatnonzero(action_mask(state, ft06)).tolist() == [1, 6, 12, 18, 24, 30]


class TestStep:
    """Tests for the transition rule."""

    def test_hand_trace(self, tiny):
        """Optimal sequence 0, 2, 1, 3 reproduces the hand schedule."""
        state, rewards = run_sequence(tiny, [0, 2, 1, 3])
        assert state.op_start.tolist() == [[0, 4], [0, 4]]
        assert state.op_completion.tolist() == [[3, 6], [4, 5]]
        assert rewards == pytest.approx([-0.1, -0.1, -1.1, -0.1])
        assert makespan(state) == 6
        assert state.done

    def test_ft06_optimal_sequence(self, ft06):
        """Dispatching an optimal schedule in start-time order reaches 55."""
        state, _ = run_sequence(ft06, FT06_OPTIMAL)
        assert makespan(state) == 55 == ft06.known_optimum
        assert is_feasible(state, ft06)
        assert lower_bound(state, ft06) == 55
        # machine 4 runs without a gap from 25 to 55
        assert state.op_start[2, 5] == 48 and state.op_completion[2, 5] == 55

    def test_bad_order(self, tiny):
        """Greedy job-0-first sequence has makespan 10."""
        state, _ = run_sequence(tiny, [0, 1, 2, 3])
        assert makespan(state) == 10

    def test_step_does_not_mutate_input(self, tiny):
        """step returns a new state and leaves its argument alone."""
        state = reset(tiny)
        nxt, _, _ = step(state, 0, tiny)
        assert state.steps_taken == 0 and not state.op_scheduled.any()
        assert nxt.steps_taken == 1 and nxt.op_scheduled[0, 0]

    def test_masked_action(self, tiny):
        """A second operation before the first is rejected."""
        with pytest.raises(InvalidActionError, match="masked"):
            step(reset(tiny), 1, tiny)

    @pytest.mark.parametrize("action", [-1, 4, 99])
    def test_out_of_range(self, tiny, action):
        """Out-of-range ids are rejected."""
        with pytest.raises(InvalidActionError):
            step(reset(tiny), action, tiny)

    def test_step_after_done(self, tiny):
        """Every action is invalid once all operations are scheduled."""
        state, _ = run_sequence(tiny, [0, 2, 1, 3])
        for action in range(tiny.n_ops):
            with pytest.raises(InvalidActionError):
                step(state, action, tiny)

    def test_makespan_before_done(self, tiny):
        """makespan of an unfinished schedule raises."""
        with pytest.raises(NotTerminalError):
            makespan(reset(tiny))

    def test_single_operation(self):
        """A 1x1 instance finishes in one step with makespan p."""
        inst = generate_random_instance(1, 1, 7, 7, seed=0)
        state, reward, done = step(reset(inst), 0, inst)
        assert done and makespan(state) == 7
        assert reward == pytest.approx(-STEP_PENALTY)


class TestEpisodeProperties:
    """Invariants checked on random episodes."""

    @pytest.mark.parametrize("n_jobs, n_machines", [(3, 3), (3, 5), (4, 4), (5, 3), (5, 5)])
    def test_rewards_telescope(self, n_jobs, n_machines):
        """Sum of rewards = initial bound - makespan - penalty * n * m, over 200 episodes per shape."""
        for seed in range(200):
            inst = generate_random_instance(n_jobs, n_machines, 1, 20, seed=seed)
            states, rewards = random_episode(inst, seed)
            expected = states[0].prev_lower_bound - makespan(states[-1]) - STEP_PENALTY * inst.n_ops
            assert sum(rewards) == pytest.approx(expected, abs=1e-9), seed

    @pytest.mark.parametrize("seed", range(5))
    def test_invariants_along_episode(self, seed):
        """Feasibility, monotone bound, mask shape and episode length."""
        inst = generate_random_instance(3, 4, 1, 10, seed=100 + seed)
        states, _ = random_episode(inst, seed)
        assert len(states) == inst.n_ops + 1
        bounds = [lower_bound(s, inst) for s in states]
        assert bounds == sorted(bounds)
        for s in states:
            assert is_feasible(s, inst)
            mask = action_mask(s, inst)
            assert mask.sum() == (s.next_pos < inst.n_machines).sum()
        assert lower_bound(states[-1], inst) == makespan(states[-1])

    def test_tampered_schedule_is_infeasible(self, tiny):
        """Overlapping operations on one machine are detected."""
        state, _ = run_sequence(tiny, [0, 2, 1, 3])
        state.op_start[1, 1] = 2
        state.op_completion[1, 1] = 3
        assert not is_feasible(state, tiny)


class TestScheduleExport:
    """Tests for the Gantt table export."""

    def test_frame(self, tiny):
        """One row per operation, sorted by machine then start."""
        state, _ = run_sequence(tiny, [0, 2, 1, 3])
        frame = schedule_frame(state, tiny)
        assert list(frame.columns) == ["job", "pos", "machine", "start", "completion"]
        assert frame[["machine", "start", "completion"]].values.tolist() == [
            [0, 0, 3], [0, 4, 5], [1, 0, 4], [1, 4, 6],
        ]

    def test_csv(self, tiny, tmp_path):
        """CSV lands where requested."""
        state, _ = run_sequence(tiny, [0, 2, 1, 3])
        path = export_schedule_csv(state, tiny, tmp_path / "gantt" / "tiny.csv")
        assert path.read_text().splitlines()[0] == "job,pos,machine,start,completion"


class TestJsspEnv:
    """Tests for the Gymnasium wrapper."""

    def test_reset_observation(self, tiny):
        """Features start as normalised durations; mask marks first operations."""
        env = JsspEnv(tiny)
        obs, info = env.reset()
        assert obs["features"].shape == (4, 3)
        assert obs["features"][:, 0].tolist() == [0.75, 0.5, 1.0, 0.25]
        assert not obs["features"][:, 1:].any()
        assert obs["action_mask"].tolist() == [True, False, True, False]
        assert info == {"lower_bound": 5, "steps_taken": 0}

    def test_episode(self, tiny):
        """Four steps finish the episode and report the makespan."""
        env = JsspEnv(tiny)
        env.reset()
        total = 0.0
        for action in [0, 2, 1, 3]:
            obs, reward, terminated, truncated, info = env.step(action)
            total += reward
        assert terminated and not truncated
        assert info["makespan"] == 6
        assert total == pytest.approx(5 - 6 - 0.4)
        assert obs["features"][:, 2].tolist() == [1.0, 1.0, 1.0, 1.0]

    def test_completion_feature(self, tiny):
        """f1 is completion over the latest completion so far."""
        env = JsspEnv(tiny)
        env.reset()
        env.step(0)
        obs, *_ = env.step(2)
        assert obs["features"][:, 1].tolist() == [0.75, 0.0, 1.0, 0.0]

    def test_reset_clears_episode(self, tiny):
        """A second reset starts from scratch."""
        env = JsspEnv(tiny)
        env.reset()
        env.step(0)
        obs, info = env.reset()
        assert info["steps_taken"] == 0
        assert env.action_masks().tolist() == [True, False, True, False]
        assert env.lower_bound == 5
        assert env.action_space.n == 4
