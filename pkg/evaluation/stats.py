"""Paired two-tailed Student t-test on per-seed makespans.

The t distribution tail is computed from the regularized incomplete beta
function, evaluated with a modified Lentz continued fraction.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_ITERATIONS = 300
EPS = 1e-15
TINY = 1e-300
ZERO_SPREAD = 1e-12


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    df: int
    mean_diff: float
    degenerate: bool = False
    """Differences had zero variance; p is 0 (nonzero mean) or 1 (all zero)."""


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # Above the mean, evaluate through I_x(a, b) = 1 - I_{1-x}(b, a).
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_tailed(t: float, df: int) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def student_t_cdf(t: float, df: int) -> float:
    tail = 0.5 * student_t_two_tailed(t, df)
    return 1.0 - tail if t >= 0 else tail


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-tailed paired t-test of ``a - b`` (pairs share a seed).

    Zero-variance differences are flagged as degenerate: t is 0 and p is 1
    when every difference is zero, otherwise t is +/-inf and p is 0. A spread
    below ZERO_SPREAD relative to the mean difference counts as zero.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"paired samples must be 1-d and equal length, got {x.shape} and {y.shape}")
    n = len(x)
    if n < 2:
        raise ValueError(f"need at least 2 pairs, got {n}")

    d = x - y
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    df = n - 1
    if sd <= ZERO_SPREAD * max(1.0, abs(mean)):
        if abs(mean) <= ZERO_SPREAD:
            return TTestResult(0.0, 1.0, df, 0.0, degenerate=True)
        return TTestResult(math.copysign(math.inf, mean), 0.0, df, mean, degenerate=True)

    t = mean / (sd / math.sqrt(n))
    return TTestResult(t, student_t_two_tailed(t, df), df, mean)


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
