"""Result tables, significance summaries and report files."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import pandas as pd

from .evaluate import EvalResult
from .stats import TTestResult, paired_t_test, significance_stars

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["instance", "method", "n_seeds", "episodes", "mean", "std", "gap_pct", "gap_std", "known_optimum", "stars"]
TTEST_COLUMNS = ["instance", "reference", "baseline", "reference_mean", "baseline_mean", "delta_pct", "t", "p", "df", "degenerate", "stars"]
CURVE_COLUMNS = ["env_steps", "seed", "arch", "instance", "eval_mean", "eval_std", "gap_pct"]

# Heuristics first, learned models after, the reference method last.
METHOD_ORDER = ["Random", "LPT", "SPT", "GIN", "Homo-HGT", "HGT"]


class ReportError(ValueError):
    """A report was requested without anything to report."""


@dataclass(frozen=True)
class Comparison:
    """Reference method against one baseline on one instance."""
    instance: str
    reference: str
    baseline: str
    reference_mean: float
    baseline_mean: float
    test: TTestResult

    @property
    def delta_pct(self) -> float:
        return relative_improvement(self.reference_mean, self.baseline_mean)

    @property
    def stars(self) -> str:
        return significance_stars(self.test.p)

    def to_row(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "reference": self.reference,
            "baseline": self.baseline,
            "reference_mean": self.reference_mean,
            "baseline_mean": self.baseline_mean,
            "delta_pct": self.delta_pct,
            "t": self.test.t,
            "p": self.test.p,
            "df": self.test.df,
            "degenerate": self.test.degenerate,
            "stars": self.stars,
        }


def relative_improvement(ours: float, baseline: float) -> float:
    """Percent by which ``ours`` undercuts ``baseline`` (positive is better)."""
    return 100.0 * (baseline - ours) / baseline


def _paired_means(reference: EvalResult, baseline: EvalResult) -> tuple[np.ndarray, np.ndarray]:
    ref = reference.seed_means
    base = baseline.seed_means
    if len(base) == 1 and len(ref) > 1:
        # deterministic rule: constant vector
        return ref, np.full_like(ref, base[0])
    if reference.seeds != baseline.seeds:
        shared = [s for s in reference.seeds if s in baseline.seeds]
        if len(shared) < 2:
            raise ValueError(
                f"cannot pair {reference.method} and {baseline.method} on {reference.instance}: "
                f"seeds {reference.seeds} vs {baseline.seeds}"
            )
        ref = np.array([ref[reference.seeds.index(s)] for s in shared])
        base = np.array([base[baseline.seeds.index(s)] for s in shared])
    return ref, base


def compare(reference: EvalResult, baseline: EvalResult) -> Comparison:
    """Paired t-test of two methods on the same instance, pairing by seed."""
    if reference.instance != baseline.instance:
        raise ValueError(f"instances differ: {reference.instance} vs {baseline.instance}")
    ref, base = _paired_means(reference, baseline)
    return Comparison(
        instance=reference.instance,
        reference=reference.method,
        baseline=baseline.method,
        reference_mean=reference.mean,
        baseline_mean=baseline.mean,
        test=paired_t_test(ref, base),
    )


def compare_all(results: Iterable[EvalResult], reference_method: str) -> list[Comparison]:
    """Compare the reference method against every other method, per instance.

    Pairs that share fewer than two seeds are skipped with a warning.
    """
    results = list(results)
    comparisons = []
    for ref in (r for r in results if r.method == reference_method):
        for other in results:
            if other.instance != ref.instance or other.method == reference_method:
                continue
            try:
                comparisons.append(compare(ref, other))
            except ValueError as e:
                logger.warning("Skipping t-test: %s", e)
    return comparisons


def _method_key(method: str) -> tuple[float, str]:
    if method in METHOD_ORDER:
        return float(METHOD_ORDER.index(method)), method
    return len(METHOD_ORDER) - 1.5, method


def _stars_lookup(comparisons: Iterable[Comparison]) -> dict[tuple[str, str], str]:
    return {(c.instance, c.baseline): c.stars for c in comparisons}


def results_frame(results: Iterable[EvalResult], comparisons: Iterable[Comparison] = ()) -> pd.DataFrame:
    stars = _stars_lookup(comparisons)
    rows = []
    for r in results:
        row = r.to_row()
        row["stars"] = stars.get((r.instance, r.method), "")
        rows.append(row)
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def ttests_frame(comparisons: Iterable[Comparison]) -> pd.DataFrame:
    return pd.DataFrame([c.to_row() for c in comparisons], columns=TTEST_COLUMNS)


def _format_mean(mean: float, std: float, stars: str = "") -> str:
    return f"{mean:.1f} ± {std:.1f}{stars}"


def _format_gap(gap: float | None, gap_std: float | None) -> str:
    if gap is None:
        return ""
    return f"{gap:.2f} ± {gap_std:.2f}"


def makespan_table(results: list[EvalResult], comparisons: Iterable[Comparison] = ()) -> pd.DataFrame:
    """One row per method, makespan (and gap when known) columns per instance."""
    stars = _stars_lookup(comparisons)
    instances = list(dict.fromkeys(r.instance for r in results))
    has_gap = {inst: any(r.known_optimum is not None for r in results if r.instance == inst) for inst in instances}
    methods = sorted({r.method for r in results}, key=_method_key)
    by_key = {(r.instance, r.method): r for r in results}

    rows = []
    for method in methods:
        row: dict[str, str] = {"Method": method}
        for inst in instances:
            r = by_key.get((inst, method))
            row[f"{inst} makespan"] = _format_mean(r.mean, r.std, stars.get((inst, method), "")) if r else ""
            if has_gap[inst]:
                row[f"{inst} gap (%)"] = _format_gap(r.gap, r.gap_std) if r else ""
        rows.append(row)
    return pd.DataFrame(rows)


def significance_table(comparisons: Iterable[Comparison]) -> pd.DataFrame:
    return pd.DataFrame([
        {
            "Comparison": f"{c.reference} vs {c.baseline}",
            "Instance": c.instance,
            "Ours": f"{c.reference_mean:.1f}",
            "Baseline": f"{c.baseline_mean:.1f}",
            "Δ%": f"{c.delta_pct:+.2f}",
            "p": f"{c.test.p:.4f}{c.stars}" + (" (degenerate)" if c.test.degenerate else ""),
        }
        for c in comparisons
    ])


def build_report(results: list[EvalResult], comparisons: list[Comparison] | None = None) -> str:
    """Markdown report: makespan table with stars, then the t-test summary."""
    if not results:
        raise ReportError("no results to report")
    comparisons = comparisons or []
    parts = [
        "## Makespan",
        "",
        makespan_table(results, comparisons).to_markdown(index=False),
        "",
        "Mean makespan ± std over seeds. * p<0.05, ** p<0.01 (paired t-test vs. reference).",
    ]
    if comparisons:
        parts += ["", "## Paired t-tests", "", significance_table(comparisons).to_markdown(index=False)]
    return "\n".join(parts) + "\n"


def curves_frame(points: Iterable[dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(list(points), columns=CURVE_COLUMNS)


def curve_summary(curves: pd.DataFrame) -> pd.DataFrame:
    """Mean and std of the per-seed evaluation makespan at each step count."""
    if curves.empty:
        return pd.DataFrame(columns=["instance", "arch", "env_steps", "mean", "std", "n_seeds"])
    grouped = curves.groupby(["instance", "arch", "env_steps"])["eval_mean"]
    summary = grouped.agg(mean="mean", std="std", n_seeds="count").reset_index()
    summary["std"] = summary["std"].fillna(0.0)
    return summary


def ablation_table(results: list[EvalResult]) -> pd.DataFrame:
    """Variants sorted by mean makespan: mean ± std and gap."""
    ordered = sorted(results, key=lambda r: r.mean)
    return pd.DataFrame([
        {
            "Variant": r.method,
            "Makespan": _format_mean(r.mean, r.std),
            "Gap": "" if r.gap is None else f"{r.gap:.2f}%",
            "Seeds": len(r.seeds),
        }
        for r in ordered
    ])


def parameter_table(breakdowns: dict[str, dict[str, int]]) -> pd.DataFrame:
    """Total and per-block trainable parameters per model, largest first."""
    rows = []
    for label, blocks in breakdowns.items():
        row: dict[str, Any] = {"Model": label, "Parameters": sum(blocks.values())}
        row.update(blocks)
        rows.append(row)
    return pd.DataFrame(rows).sort_values("Parameters", ascending=False).reset_index(drop=True)


def write_reports(
    out_dir: str | Path,
    results: list[EvalResult],
    comparisons: list[Comparison] | None = None,
    curves: pd.DataFrame | None = None,
) -> dict[str, Path]:
    """Write results.csv, results.md, ttests.csv, curves.csv and curve_summary.csv into ``out_dir``."""
    if not results:
        raise ReportError("no results to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    comparisons = comparisons or []
    paths = {
        "results.csv": out / "results.csv",
        "results.md": out / "results.md",
        "ttests.csv": out / "ttests.csv",
        "curves.csv": out / "curves.csv",
        "curve_summary.csv": out / "curve_summary.csv",
    }
    results_frame(results, comparisons).to_csv(paths["results.csv"], index=False)
    paths["results.md"].write_text(build_report(results, comparisons), encoding="utf-8")
    ttests_frame(comparisons).to_csv(paths["ttests.csv"], index=False)
    curves = curves if curves is not None else curves_frame([])
    curves.to_csv(paths["curves.csv"], index=False)
    curve_summary(curves).to_csv(paths["curve_summary.csv"], index=False)
    logger.info("wrote reports to %s", out)
    return paths
