"""Correlation coefficients and the one-sided Wilcoxon signed-rank test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import stdtr

from .exceptions import DegenerateInputError

ALTERNATIVES = ("two-sided", "less", "greater")

# below this many nonzero differences the Wilcoxon p-value is exact
_WILCOXON_EXACT_MAX = 25


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    n: int
    alternative: str


def _midranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with tied values assigned the mean of their positions."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _pearson_p(r: float, n: int) -> float:
    # two-sided p from the t distribution with n-2 degrees of freedom
    if 1.0 - r * r <= 0.0:
        return 0.0
    t = abs(r) * math.sqrt((n - 2) / (1.0 - r * r))
    return float(2.0 * stdtr(n - 2, -t))


def _check_pair(x, y, min_n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if x.size < min_n:
        raise ValueError(f"need at least {min_n} observations, got {x.size}")
    return x, y


def pearson(x, y) -> TestResult:
    """Sample Pearson correlation with a two-sided t-test p-value."""
    x, y = _check_pair(x, y, 3)
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.sum(xc * xc))
    sy = float(np.sum(yc * yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("pearson requires nonzero variance in both inputs")
    r = float(np.sum(xc * yc) / math.sqrt(sx * sy))
    r = min(1.0, max(-1.0, r))
    return TestResult(r, _pearson_p(r, x.size), x.size, "two-sided")


def spearman(x, y) -> TestResult:
    """Spearman rank correlation: Pearson on mid-ranks (ties averaged)."""
    x, y = _check_pair(x, y, 3)
    rx = _midranks(x)
    ry = _midranks(y)
    try:
        result = pearson(rx, ry)
    except DegenerateInputError:
        raise DegenerateInputError("spearman is undefined when an input is entirely tied") from None
    return TestResult(result.statistic, result.p_value, x.size, "two-sided")


def _wilcoxon_exact_p(doubled_ranks: np.ndarray, doubled_w: int, alternative: str) -> float:
    """Exact null distribution of W by counting sign assignments.

    Works on integer-doubled mid-ranks so tied (half-integer) ranks stay
    exact; the count array enumerates all 2^n sign vectors implicitly.
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts = counts + shifted
    denom = 2.0 ** len(doubled_ranks)
    less = counts[: doubled_w + 1].sum() / denom
    greater = counts[doubled_w:].sum() / denom
    if alternative == "less":
        return float(less)
    if alternative == "greater":
        return float(greater)
    return float(min(1.0, 2.0 * min(less, greater)))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank(x, y, alternative: str = "two-sided") -> TestResult:
    """Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped (Wilcoxon's rule); ties in |difference|
    receive mid-ranks.  The statistic W is the rank sum of the positive
    differences.  The p-value is exact (sign enumeration) for up to 25
    nonzero differences and otherwise uses the normal approximation with
    tie and continuity corrections.  Alternative 'greater' tests for
    x > y, 'less' for x < y.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    x, y = _check_pair(x, y, 2)
    diff = x - y
    diff = diff[diff != 0.0]
    n = diff.size
    if n == 0:
        raise DegenerateInputError("all paired differences are zero")

    ranks = _midranks(np.abs(diff))
    w = float(ranks[diff > 0].sum())

    if n <= _WILCOXON_EXACT_MAX:
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        doubled_w = int(round(2.0 * w))
        p = _wilcoxon_exact_p(doubled, doubled_w, alternative)
    else:
        mean = n * (n + 1) / 4.0
        _, tie_counts = np.unique(ranks, return_counts=True)
        tie_term = float(np.sum(tie_counts.astype(np.float64) ** 3 - tie_counts))
        var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
        sd = math.sqrt(var)
        if alternative == "greater":
            p = _normal_sf((w - mean - 0.5) / sd)
        elif alternative == "less":
            p = 1.0 - _normal_sf((w - mean + 0.5) / sd)
        else:
            p = min(1.0, 2.0 * _normal_sf((abs(w - mean) - 0.5) / sd))
    return TestResult(w, p, n, alternative)
