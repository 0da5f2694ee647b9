"""Policy evaluation, significance testing and reports."""

from .evaluate import EvalResult, evaluate, greedy_rollout, optimality_gap
from .report import (
    CURVE_COLUMNS,
    RESULT_COLUMNS,
    TTEST_COLUMNS,
    Comparison,
    ReportError,
    ablation_table,
    build_report,
    compare,
    compare_all,
    curve_summary,
    curves_frame,
    makespan_table,
    parameter_table,
    relative_improvement,
    results_frame,
    significance_table,
    ttests_frame,
    write_reports,
)
from .stats import (
    TTestResult,
    paired_t_test,
    regularized_incomplete_beta,
    significance_stars,
    student_t_cdf,
    student_t_two_tailed,
)

__all__ = [
    "CURVE_COLUMNS",
    "Comparison",
    "EvalResult",
    "RESULT_COLUMNS",
    "ReportError",
    "TTEST_COLUMNS",
    "TTestResult",
    "ablation_table",
    "build_report",
    "compare",
    "compare_all",
    "curve_summary",
    "curves_frame",
    "evaluate",
    "greedy_rollout",
    "makespan_table",
    "optimality_gap",
    "paired_t_test",
    "parameter_table",
    "regularized_incomplete_beta",
    "relative_improvement",
    "results_frame",
    "significance_stars",
    "significance_table",
    "student_t_cdf",
    "student_t_two_tailed",
    "ttests_frame",
    "write_reports",
]
