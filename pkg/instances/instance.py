"""Job-shop instances: parsing, rendering, validation and generation.

File layout (OR-library style): a header line ``n m`` followed by ``n`` job
lines, each holding ``m`` pairs ``machine duration`` in processing order.
Machines are 0-based. Lines starting with ``#`` are comments; a comment of the
form ``# optimum: N`` attaches a known optimal makespan to the instance.
"""

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_OPTIMUM_RE = re.compile(r"^#\s*optimum\s*:\s*(\d+)\s*$", re.IGNORECASE)


class InstanceParseError(ValueError):
    """Base class for malformed instance files."""

    def __init__(self, line_no: int, message: str) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class HeaderError(InstanceParseError):
    """The ``n m`` header is missing or not two positive integers."""


class PairCountError(InstanceParseError):
    """A job line does not hold exactly ``m`` machine/duration pairs."""


class DurationError(InstanceParseError):
    """A processing time is not a positive integer."""


class MachineIndexError(InstanceParseError):
    """A machine index falls outside ``0..m-1``."""


class RepeatedMachineError(InstanceParseError):
    """A job visits the same machine twice."""


@dataclass(frozen=True, eq=False)
class JsspInstance:
    """Static job-shop problem data.

    ``machine_of[i][j]`` is the machine of operation ``j`` of job ``i`` and
    ``proc_time[i][j]`` its duration. Arrays are read-only so an instance can be
    shared between workers.
    """
    machine_of: np.ndarray
    proc_time: np.ndarray
    name: str = "instance"
    known_optimum: int | None = None

    def __post_init__(self) -> None:
        machine_of = _integer_matrix(self.machine_of, "machine_of")
        proc_time = _integer_matrix(self.proc_time, "proc_time")
        validate_matrices(machine_of, proc_time)
        machine_of.setflags(write=False)
        proc_time.setflags(write=False)
        object.__setattr__(self, "machine_of", machine_of)
        object.__setattr__(self, "proc_time", proc_time)

    @property
    def n_jobs(self) -> int:
        return int(self.machine_of.shape[0])

    @property
    def n_machines(self) -> int:
        return int(self.machine_of.shape[1])

    @property
    def n_ops(self) -> int:
        return self.n_jobs * self.n_machines

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JsspInstance):
            return NotImplemented
        return (
            self.name == other.name
            and self.known_optimum == other.known_optimum
            and np.array_equal(self.machine_of, other.machine_of)
            and np.array_equal(self.proc_time, other.proc_time)
        )

    def __hash__(self) -> int:
        return hash((self.name, self.machine_of.tobytes(), self.proc_time.tobytes()))

    def __repr__(self) -> str:
        return f"<JsspInstance {self.name!r} {self.n_jobs}x{self.n_machines}>"


def _integer_matrix(values, label: str) -> np.ndarray:
    """Copy to int64, refusing values that would be truncated by the cast."""
    array = np.array(values)
    if array.dtype.kind in "iu":
        return array.astype(np.int64)
    if array.dtype.kind != "f" or not np.isfinite(array).all() or (array != np.round(array)).any():
        raise ValueError(f"{label} must hold integers, got {values!r}")
    return array.astype(np.int64)


def validate_matrices(machine_of: np.ndarray, proc_time: np.ndarray) -> None:
    """Raise ValueError unless the matrices describe a valid job shop."""
    if machine_of.ndim != 2 or machine_of.shape != proc_time.shape:
        raise ValueError(
            f"machine_of {machine_of.shape} and proc_time {proc_time.shape} must be equal 2-D shapes"
        )
    n, m = machine_of.shape
    if n < 1 or m < 1:
        raise ValueError("instance needs at least one job and one machine")
    if (proc_time < 1).any():
        raise ValueError("every processing time must be >= 1")
    expected = np.arange(m)
    for i in range(n):
        if not np.array_equal(np.sort(machine_of[i]), expected):
            raise ValueError(f"job {i} does not visit every machine exactly once")


def parse_instance(text: str, name: str = "instance") -> JsspInstance:
    """Parse an OR-library style instance.

    Raises:
        InstanceParseError: a subclass naming the offending 1-based line
    """
    known_optimum: int | None = None
    rows: list[tuple[int, list[str]]] = []
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _OPTIMUM_RE.match(line)
            if match:
                known_optimum = int(match.group(1))
            continue
        rows.append((line_no, line.split()))

    if not rows:
        raise HeaderError(max(last_line, 1), "missing 'n m' header")

    header_line, header = rows[0]
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise HeaderError(header_line, f"expected two positive integers 'n m', got {' '.join(header)!r}")
    n, m = int(header[0]), int(header[1])
    if n < 1 or m < 1:
        raise HeaderError(header_line, f"job and machine counts must be positive, got {n} {m}")

    job_rows = rows[1:]
    if len(job_rows) != n:
        line_no = job_rows[n][0] if len(job_rows) > n else last_line
        raise PairCountError(line_no, f"expected {n} job lines, found {len(job_rows)}")

    machine_of = np.zeros((n, m), dtype=np.int64)
    proc_time = np.zeros((n, m), dtype=np.int64)
    for i, (line_no, tokens) in enumerate(job_rows):
        if len(tokens) != 2 * m:
            raise PairCountError(line_no, f"expected {m} machine/duration pairs, found {len(tokens) / 2:g}")
        seen: set[int] = set()
        for j in range(m):
            machine_tok, duration_tok = tokens[2 * j], tokens[2 * j + 1]
            try:
                machine = int(machine_tok)
            except ValueError:
                raise MachineIndexError(line_no, f"machine index {machine_tok!r} is not an integer") from None
            try:
                duration = int(duration_tok)
            except ValueError:
                raise DurationError(line_no, f"duration {duration_tok!r} is not an integer") from None
            if not 0 <= machine < m:
                raise MachineIndexError(line_no, f"machine {machine} outside 0..{m - 1}")
            if duration < 1:
                raise DurationError(line_no, f"duration {duration} must be positive")
            if machine in seen:
                raise RepeatedMachineError(line_no, f"machine {machine} visited twice by job {i}")
            seen.add(machine)
            machine_of[i, j] = machine
            proc_time[i, j] = duration

    return JsspInstance(machine_of, proc_time, name=name, known_optimum=known_optimum)


def render_instance(inst: JsspInstance) -> str:
    """Render an instance in the layout ``parse_instance`` reads."""
    lines = []
    if inst.known_optimum is not None:
        lines.append(f"# optimum: {inst.known_optimum}")
    lines.append(f"{inst.n_jobs} {inst.n_machines}")
    for i in range(inst.n_jobs):
        pairs = (f"{inst.machine_of[i, j]} {inst.proc_time[i, j]}" for j in range(inst.n_machines))
        lines.append(" ".join(pairs))
    return "\n".join(lines) + "\n"


def max_processing_time(inst: JsspInstance) -> int:
    """Largest processing time in the instance (feature normaliser)."""
    return int(inst.proc_time.max())


def total_work(inst: JsspInstance) -> np.ndarray:
    """Per-job sum of processing times."""
    return inst.proc_time.sum(axis=1)


def generate_random_instance(
    n: int, m: int, p_min: int, p_max: int, seed: int, name: str | None = None
) -> JsspInstance:
    """Uniform random instance: permuted machine rows, durations in [p_min, p_max]."""
    if n < 1 or m < 1:
        raise ValueError(f"n and m must be >= 1, got {n}x{m}")
    if not 1 <= p_min <= p_max:
        raise ValueError(f"need 1 <= p_min <= p_max, got [{p_min}, {p_max}]")
    rng = np.random.default_rng(seed)
    machine_of = np.stack([rng.permutation(m) for _ in range(n)])
    proc_time = rng.integers(p_min, p_max, size=(n, m), endpoint=True)
    return JsspInstance(machine_of, proc_time, name=name or f"rand{n}x{m}-s{seed}")


def read_instance(path: str | Path) -> JsspInstance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem)
