#!/usr/bin/env python3
"""shopgraph - job-shop scheduling with heterogeneous graph policies.

Usage examples::

    python main.py train --instance ft06 --arch hgt
    python main.py baseline --instance ft06
    python main.py stats --instance ft06
    python main.py ablate --instance ft06
    python main.py solve-optimal --instance tiny2x2
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from config_manager import ConfigManager, read_flat_file
from experiment_manager import (
    EXIT_USAGE,
    cmd_ablate,
    cmd_baseline,
    cmd_eval,
    cmd_report,
    cmd_solve_optimal,
    cmd_stats,
    cmd_train,
)
from instances import InstanceParseError, shipped_instances
from run_config import OUT_ENV_VAR, RunConfig

COMMANDS = {
    "train": (cmd_train, "Train a policy with PPO on every seed, then evaluate it"),
    "eval": (cmd_eval, "Re-evaluate saved checkpoints greedily"),
    "baseline": (cmd_baseline, "Evaluate the SPT, LPT and Random dispatching rules"),
    "stats": (cmd_stats, "Paired t-tests of the reference method against every other method"),
    "ablate": (cmd_ablate, "Depth ablation: train every layer count on the ablation seeds"),
    "solve-optimal": (cmd_solve_optimal, "Exact optimum of a tiny instance by exhaustive search"),
    "report": (cmd_report, "Rebuild the instance report files from every run on disk"),
}

# Flags that map one-to-one onto RunConfig fields.
RUN_FLAGS = ("instance", "arch", "seeds", "layers", "steps", "episodes", "workers", "out_dir")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--instance",
        help=f"shipped instance ({', '.join(shipped_instances())}) or path to an instance file (default: ft06)",
    )
    parser.add_argument("--arch", help="policy architecture: hgt, homo_hgt or gin (default: from config)")
    parser.add_argument("--seeds", help="comma-separated seeds, e.g. 0,1,2 (default: from config)")
    parser.add_argument("--layers", type=int, help="number of encoder layers (default: from config)")
    parser.add_argument("--steps", type=int, help="environment steps per training run (default: 50000)")
    parser.add_argument("--episodes", type=int, help="evaluation episodes per seed (default: 50)")
    parser.add_argument("--workers", type=int, help="worker processes; 0 = one per run, 1 = in-process")
    parser.add_argument(
        "--out", dest="out_dir", type=Path,
        help=f"output root (default: ${OUT_ENV_VAR}, then out_dir from the settings file)",
    )
    parser.add_argument("--config", type=Path, help="flat key=value run file; flags override its values")
    parser.add_argument("--settings", type=Path, default=Path("config.json"),
                        help="JSON settings file with model/train/eval sections (default: config.json)")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="library log level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shopgraph",
        description="Job-shop scheduling with heterogeneous graph transformer policies trained by PPO.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name, (_, help_text) in COMMANDS.items():
        _add_common_flags(sub.add_parser(name, help=help_text, description=help_text))
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    flags: dict[str, Any] = {name: getattr(args, name) for name in RUN_FLAGS}
    flags["subcommand"] = args.subcommand
    file_values = read_flat_file(args.config) if args.config else {}
    return RunConfig.merge(flags, file_values)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        run = build_run_config(args)
    except (ValidationError, ValueError, OSError) as e:
        print(f"Invalid run configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    config = ConfigManager(args.settings).config
    command, _ = COMMANDS[args.subcommand]
    try:
        result = command(run, config)
        return asyncio.run(result) if asyncio.iscoroutine(result) else result
    except (FileNotFoundError, InstanceParseError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\nInterrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
