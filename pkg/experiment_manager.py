"""Run orchestration for the CLI subcommands.

Every subcommand expands into independent runs (one per seed, rule or
variant). Runs go to a bounded process pool driven from asyncio; each run is
attempted on its own, failures are reported and do not stop the others.

Output layout::

    <out>/<instance>/<label>/<seed>/checkpoint.pt   trained policy
    <out>/<instance>/<label>/<seed>/curve.csv       learning curve of that run
    <out>/<instance>/<label>/<seed>/eval.csv        evaluation makespans
    <out>/<instance>/results.csv, results.md, ttests.csv, curves.csv, curve_summary.csv
"""

import asyncio
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import pandas as pd
import torch

from config import Config, ModelConfig, TrainConfig
from evaluation import (
    CURVE_COLUMNS,
    EvalResult,
    ReportError,
    ablation_table,
    build_report,
    compare_all,
    curves_frame,
    evaluate,
    parameter_table,
    significance_table,
    ttests_frame,
    write_reports,
)
from events import Event, EventBus, EventType
from heuristics import (
    BudgetExceededError,
    DispatchRule,
    InstanceTooLargeError,
    RuleKind,
    brute_force_optimal,
    check_solvable,
    evaluate_rule,
)
from instances import JsspInstance, load_instance
from policies import Arch, build_policy, load_checkpoint, parameter_breakdown
from ppo import train
from run_config import RunConfig

logger = logging.getLogger(__name__)

DEFAULT_LAYERS = ModelConfig().layers
EVAL_COLUMNS = ["instance", "method", "seed", "episode", "makespan"]

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_USAGE = 2


def run_label(arch: str, layers: int) -> str:
    """Directory name of a learned variant: ``hgt``, ``hgt-1l``, ..."""
    return arch if layers == DEFAULT_LAYERS else f"{arch}-{layers}l"


def method_name(arch: str, layers: int) -> str:
    """Report name of a learned variant: ``HGT``, ``HGT-1Layer``, ..."""
    label = Arch.parse(arch).label
    return label if layers == DEFAULT_LAYERS else f"{label}-{layers}Layer"


@dataclass(frozen=True)
class RunSpec:
    """One unit of work. ``kind`` is ``train``, ``eval`` or ``rule``."""
    kind: str
    inst: JsspInstance
    method: str
    seed: int
    run_dir: Path
    episodes: int
    model: ModelConfig | None = None
    train: TrainConfig | None = None
    rule: DispatchRule | None = None

    @property
    def run_id(self) -> str:
        return f"{self.inst.name}/{self.run_dir.parent.name}/{self.seed}"


@dataclass
class RunOutcome:
    run_id: str
    method: str
    seed: int
    makespans: list[int] = field(default_factory=list)
    error: str | None = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None


def _write_eval(spec: RunSpec, makespans: list[int]) -> None:
    rows = [
        {"instance": spec.inst.name, "method": spec.method, "seed": spec.seed, "episode": i, "makespan": m}
        for i, m in enumerate(makespans)
    ]
    spec.run_dir.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=EVAL_COLUMNS).to_csv(spec.run_dir / "eval.csv", index=False)


def _train_run(spec: RunSpec) -> list[int]:
    result = train(spec.inst, spec.model, spec.train, spec.run_dir / "checkpoint.pt")
    curve = curves_frame(
        {
            "env_steps": p.env_steps, "seed": spec.seed, "arch": spec.method,
            "instance": spec.inst.name, "eval_mean": p.eval_mean, "eval_std": p.eval_std,
            "gap_pct": p.gap,
        }
        for p in result.curve
    )
    curve.to_csv(spec.run_dir / "curve.csv", index=False)
    return evaluate(result.model, spec.inst, spec.episodes)


def _eval_run(spec: RunSpec) -> list[int]:
    checkpoint = load_checkpoint(spec.run_dir / "checkpoint.pt")
    return evaluate(checkpoint.model, spec.inst, spec.episodes)


def _rule_run(spec: RunSpec) -> list[int]:
    return evaluate_rule(spec.inst, spec.rule, spec.episodes)


_EXECUTORS: dict[str, Callable[[RunSpec], list[int]]] = {
    "train": _train_run,
    "eval": _eval_run,
    "rule": _rule_run,
}


def execute(spec: RunSpec) -> RunOutcome:
    """Run one spec to completion, converting any failure into an outcome."""
    started = time.time()
    try:
        makespans = _EXECUTORS[spec.kind](spec)
        _write_eval(spec, makespans)
        return RunOutcome(spec.run_id, spec.method, spec.seed, makespans, elapsed=time.time() - started)
    except Exception as e:
        logger.exception("Run %s failed", spec.run_id)
        return RunOutcome(spec.run_id, spec.method, spec.seed, error=f"{type(e).__name__}: {e}",
                          elapsed=time.time() - started)


def _init_worker() -> None:
    # one intra-op thread per process
    torch.set_num_threads(1)


class ExperimentManager:
    """Dispatches runs to a worker pool and publishes their lifecycle events."""

    def __init__(self, event_bus: EventBus, workers: int = 0) -> None:
        """
        Args:
            event_bus: bus receiving RUN_* and REPORT_WRITTEN events
            workers: pool size; 0 means one worker per run, 1 runs in-process
        """
        self.event_bus = event_bus
        self.workers = workers
        self.outcomes: list[RunOutcome] = []

    def pool_size(self, n_runs: int) -> int:
        if self.workers == 0:
            return max(1, n_runs)
        return max(1, min(self.workers, n_runs))

    async def _finish(self, outcome: RunOutcome) -> None:
        self.outcomes.append(outcome)
        if outcome.ok:
            data = {"method": outcome.method, "seed": outcome.seed, "makespans": outcome.makespans,
                    "elapsed": outcome.elapsed}
            await self.event_bus.publish(Event(EventType.RUN_COMPLETED, data, outcome.run_id))
        else:
            data = {"method": outcome.method, "seed": outcome.seed, "error": outcome.error}
            await self.event_bus.publish(Event(EventType.RUN_FAILED, data, outcome.run_id))

    async def run_all(self, specs: list[RunSpec]) -> list[RunOutcome]:
        """Execute ``specs`` and return their outcomes in input order."""
        processor = asyncio.create_task(self.event_bus.process(), name="event_bus")
        try:
            for spec in specs:
                await self.event_bus.publish(Event(
                    EventType.RUN_STARTED, {"method": spec.method, "seed": spec.seed, "kind": spec.kind}, spec.run_id,
                ))

            size = self.pool_size(len(specs))
            if size == 1:
                outcomes = []
                for spec in specs:
                    outcome = execute(spec)
                    await self._finish(outcome)
                    await asyncio.sleep(0)
                    outcomes.append(outcome)
            else:
                loop = asyncio.get_running_loop()
                with ProcessPoolExecutor(max_workers=size, initializer=_init_worker) as pool:
                    async def run_one(spec: RunSpec) -> RunOutcome:
                        outcome = await loop.run_in_executor(pool, execute, spec)
                        await self._finish(outcome)
                        return outcome

                    outcomes = list(await asyncio.gather(*(run_one(s) for s in specs)))
            await self.event_bus.join()
        finally:
            processor.cancel()
        return outcomes

    @property
    def failures(self) -> list[RunOutcome]:
        return [o for o in self.outcomes if not o.ok]

    def exit_code(self) -> int:
        return EXIT_RUN_FAILED if self.failures else EXIT_OK


def print_progress(bus: EventBus) -> None:
    """Subscribe console printers for the run lifecycle."""
    def started(event: Event) -> None:
        print(f"  started   {event.run_id}")

    def completed(event: Event) -> None:
        makespans = event.data["makespans"]
        mean = sum(makespans) / len(makespans)
        print(f"  completed {event.run_id}: makespan {mean:.1f} ({event.data['elapsed']:.1f}s)")

    def failed(event: Event) -> None:
        print(f"  FAILED    {event.run_id}: {event.data['error']}")

    def report(event: Event) -> None:
        print(f"  wrote     {', '.join(str(p) for p in event.data['paths'])}")

    bus.subscribe(EventType.RUN_STARTED, started)
    bus.subscribe(EventType.RUN_COMPLETED, completed)
    bus.subscribe(EventType.RUN_FAILED, failed)
    bus.subscribe(EventType.REPORT_WRITTEN, report)


def collect_results(out_root: Path, inst: JsspInstance) -> tuple[list[EvalResult], pd.DataFrame]:
    """Every evaluated run under ``<out>/<instance>/`` grouped by method."""
    base = out_root / inst.name
    eval_files = sorted(base.glob("*/*/eval.csv"))
    curve_files = sorted(base.glob("*/*/curve.csv"))
    curves = pd.concat([pd.read_csv(p) for p in curve_files], ignore_index=True) if curve_files \
        else curves_frame([])
    if not eval_files:
        return [], curves

    frame = pd.concat([pd.read_csv(p) for p in eval_files], ignore_index=True)
    results = []
    for method, group in frame.groupby("method", sort=False):
        per_seed = {int(seed): g.sort_values("episode")["makespan"].tolist() for seed, g in group.groupby("seed")}
        results.append(EvalResult.from_makespans(inst.name, str(method), per_seed, inst.known_optimum))
    return results, curves.reindex(columns=CURVE_COLUMNS)


async def write_instance_report(bus: EventBus, out_root: Path, inst: JsspInstance, reference: str) -> dict[str, Path]:
    """Regenerate the instance-level report files from every run on disk."""
    results, curves = collect_results(out_root, inst)
    if not results:
        raise ReportError(f"no evaluated runs under {out_root / inst.name}")
    comparisons = compare_all(results, reference)
    paths = write_reports(out_root / inst.name, results, comparisons, curves)
    processor = asyncio.create_task(bus.process(), name="event_bus")
    try:
        await bus.publish(Event(EventType.REPORT_WRITTEN, {"paths": list(paths.values())}))
        await bus.join()
    finally:
        processor.cancel()
    return paths


@dataclass
class Session:
    """Everything one subcommand needs: settings, instance, bus and pool."""
    run: RunConfig
    config: Config
    inst: JsspInstance
    out_root: Path
    bus: EventBus
    manager: ExperimentManager

    @classmethod
    def open(cls, run: RunConfig, config: Config) -> "Session":
        inst = load_instance(run.instance)
        bus = EventBus()
        print_progress(bus)
        return cls(run, config, inst, run.resolve_out_dir(config), bus,
                   ExperimentManager(bus, run.resolve_workers(config)))

    @property
    def reference(self) -> str:
        return method_name(self.run.resolve_reference_arch(self.config), DEFAULT_LAYERS)

    def learned_spec(self, kind: str, model: ModelConfig, seed: int) -> RunSpec:
        return RunSpec(
            kind=kind,
            inst=self.inst,
            method=method_name(model.arch, model.layers),
            seed=seed,
            run_dir=self.out_root / self.inst.name / run_label(model.arch, model.layers) / str(seed),
            episodes=self.run.resolve_episodes(self.config),
            model=model,
            train=self.run.build_train_config(self.config, seed),
        )

    def rule_spec(self, rule: DispatchRule, seed: int) -> RunSpec:
        return RunSpec(
            kind="rule",
            inst=self.inst,
            method=rule.label,
            seed=seed,
            run_dir=self.out_root / self.inst.name / rule.kind.value / str(seed),
            episodes=self.run.resolve_episodes(self.config),
            rule=rule,
        )

    async def finish(self) -> int:
        try:
            await write_instance_report(self.bus, self.out_root, self.inst, self.reference)
        except ReportError as e:
            print(f"No report written: {e}")
        failures = self.manager.failures
        if failures:
            print(f"{len(failures)} run(s) failed:")
            for outcome in failures:
                print(f"  {outcome.run_id}: {outcome.error}")
        return self.manager.exit_code()


def _banner(title: str, session: Session) -> None:
    print("=" * 50)
    print(title)
    print("=" * 50)
    print(f"Instance: {session.inst.name} ({session.inst.n_jobs}x{session.inst.n_machines})")
    if session.inst.known_optimum is not None:
        print(f"Known optimum: {session.inst.known_optimum}")
    print(f"Output: {session.out_root}")


async def cmd_train(run: RunConfig, config: Config) -> int:
    session = Session.open(run, config)
    model = run.build_model_config(config)
    seeds = run.resolve_seeds(config)
    _banner(f"Training {method_name(model.arch, model.layers)} on seeds {seeds}", session)
    await session.manager.run_all([session.learned_spec("train", model, s) for s in seeds])
    return await session.finish()


async def cmd_eval(run: RunConfig, config: Config) -> int:
    session = Session.open(run, config)
    model = run.build_model_config(config)
    seeds = run.resolve_seeds(config)
    _banner(f"Evaluating {method_name(model.arch, model.layers)} checkpoints", session)
    await session.manager.run_all([session.learned_spec("eval", model, s) for s in seeds])
    return await session.finish()


async def cmd_baseline(run: RunConfig, config: Config) -> int:
    session = Session.open(run, config)
    _banner("Dispatching-rule baselines", session)
    specs = [
        session.rule_spec(DispatchRule(RuleKind.SPT), 0),
        session.rule_spec(DispatchRule(RuleKind.LPT), 0),
    ]
    specs += [session.rule_spec(DispatchRule(RuleKind.RANDOM, seed), seed) for seed in run.resolve_seeds(config)]
    await session.manager.run_all(specs)
    return await session.finish()


async def cmd_ablate(run: RunConfig, config: Config) -> int:
    session = Session.open(run, config)
    seeds = list(run.seeds) if run.seeds is not None else list(config.ablation_seeds)
    layer_counts = [run.layers] if run.layers is not None else list(config.ablation_layers)
    model = run.build_model_config(config)
    _banner(f"Depth ablation of {Arch.parse(model.arch).label}: layers {layer_counts} x seeds {seeds}", session)

    specs = []
    for layers in layer_counts:
        variant = replace(model, layers=layers)
        variant.validate()
        specs += [session.learned_spec("train", variant, s) for s in seeds]
    await session.manager.run_all(specs)

    results, _ = collect_results(session.out_root, session.inst)
    restricted = [r for r in (res.restrict(seeds) for res in results) if r is not None]
    rule_methods = {DispatchRule(kind).label for kind in RuleKind}
    learned = [r for r in restricted if r.method not in rule_methods]
    if learned:
        table = ablation_table(learned)
        base = session.out_root / session.inst.name
        table.to_csv(base / "ablation.csv", index=False)
        (base / "ablation.md").write_text(table.to_markdown(index=False) + "\n", encoding="utf-8")
        print(table.to_markdown(index=False))

    params = parameter_table({
        Arch.parse(arch).label: parameter_breakdown(build_policy(replace(config.model, arch=arch)))
        for arch in ("hgt", "homo_hgt", "gin")
    })
    params.to_csv(session.out_root / session.inst.name / "parameters.csv", index=False)
    print(params.to_markdown(index=False))
    return await session.finish()


async def cmd_stats(run: RunConfig, config: Config) -> int:
    inst = load_instance(run.instance)
    out_root = run.resolve_out_dir(config)
    results, _ = collect_results(out_root, inst)
    reference = method_name(run.resolve_reference_arch(config), run.layers or DEFAULT_LAYERS)
    if not any(r.method == reference for r in results):
        print(f"No results for {reference} on {inst.name} under {out_root}")
        return EXIT_USAGE
    comparisons = compare_all(results, reference)
    if not comparisons:
        print(f"Nothing to compare {reference} against on {inst.name}")
        return EXIT_USAGE
    path = out_root / inst.name / "ttests.csv"
    ttests_frame(comparisons).to_csv(path, index=False)
    print(significance_table(comparisons).to_markdown(index=False))
    print(f"\nWrote {path}")
    return EXIT_OK


async def cmd_report(run: RunConfig, config: Config) -> int:
    inst = load_instance(run.instance)
    out_root = run.resolve_out_dir(config)
    bus = EventBus()
    print_progress(bus)
    reference = method_name(run.resolve_reference_arch(config), run.layers or DEFAULT_LAYERS)
    try:
        await write_instance_report(bus, out_root, inst, reference)
    except ReportError as e:
        print(f"Error: {e}")
        return EXIT_USAGE
    results, _ = collect_results(out_root, inst)
    print(build_report(results, compare_all(results, reference)))
    return EXIT_OK


def cmd_solve_optimal(run: RunConfig, config: Config) -> int:
    inst = load_instance(run.instance)
    try:
        check_solvable(inst)
        optimum, witness = brute_force_optimal(inst)
    except (InstanceTooLargeError, BudgetExceededError) as e:
        print(f"Error: {e}")
        return EXIT_USAGE
    print(f"{inst.name}: optimal makespan {optimum}")
    print("witness: " + " ".join(f"J{a // inst.n_machines}.{a % inst.n_machines}" for a in witness))
    if inst.known_optimum is not None and inst.known_optimum != optimum:
        logger.warning("%s: brute force found %d but the file records %d", inst.name, optimum, inst.known_optimum)
    return EXIT_OK
