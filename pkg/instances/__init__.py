"""Job-shop instances and the shipped benchmark files."""

from pathlib import Path

from .instance import (
    DurationError,
    HeaderError,
    InstanceParseError,
    JsspInstance,
    MachineIndexError,
    PairCountError,
    RepeatedMachineError,
    generate_random_instance,
    max_processing_time,
    parse_instance,
    read_instance,
    render_instance,
    total_work,
)

DATA_DIR = Path(__file__).parent / "data"


def shipped_instances() -> list[str]:
    """Names of the instance files bundled with the package."""
    return sorted(p.stem for p in DATA_DIR.glob("*.txt"))


def load_instance(name_or_path: str | Path) -> JsspInstance:
    """Load a shipped instance by name (``ft06``) or any instance file by path."""
    candidate = DATA_DIR / f"{str(name_or_path).lower()}.txt"
    if candidate.exists():
        return read_instance(candidate)
    path = Path(name_or_path)
    if not path.exists():
        raise FileNotFoundError(
            f"Unknown instance '{name_or_path}' (shipped: {', '.join(shipped_instances())})"
        )
    return read_instance(path)


__all__ = [
    "DATA_DIR",
    "DurationError",
    "HeaderError",
    "InstanceParseError",
    "JsspInstance",
    "MachineIndexError",
    "PairCountError",
    "RepeatedMachineError",
    "generate_random_instance",
    "load_instance",
    "max_processing_time",
    "parse_instance",
    "read_instance",
    "render_instance",
    "shipped_instances",
    "total_work",
]
