"""Cross-run statistics: descriptives, unique-value counts, Spearman rho.

The Spearman p-value is exact (full permutation enumeration) for n <= 10
and a two-sided Student-t approximation above that.  The exact branch
reduces each permutation to an integer dot-product comparison, so it is
free of floating-point tie ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import t as student_t

from . import kernels
from .errors import ConfigError, UndefinedCorrelationError, UndefinedMetricError
from .metrics import NUMERIC_FIELDS, MetricReport

EXACT_PERMUTATION_MAX_N = 10


@dataclass
class Descriptives:
    n: int
    mean: float
    sd: float  # sample standard deviation (n-1); 0.0 when n == 1
    min: float
    max: float


@dataclass
class CorrelationResult:
    rho: float
    p_value: float
    n: int
    method: str  # "exact_permutation" or "t_approx"


def _average_ranks(values: list[float]) -> list[float]:
    """Ranks 1..n with ties averaged."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) share the average of ranks i+1..j+1
        avg = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x: list[float], y: list[float]) -> CorrelationResult:
    """Spearman rank correlation with a two-sided p-value.

    rho is the Pearson correlation of the average ranks.  For n <= 10 the
    p-value is the exact fraction of the n! pairings whose |rho| reaches
    the observed one; for larger n it uses t = rho*sqrt((n-2)/(1-rho^2))
    against Student-t(n-2).
    """
    if len(x) != len(y):
        raise ConfigError(f"input lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise UndefinedCorrelationError(f"need at least 3 observations, got {n}")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")

    rx = _average_ranks(list(x))
    ry = _average_ranks(list(y))
    mean_rank = (n + 1) / 2
    dx = [r - mean_rank for r in rx]
    dy = [r - mean_rank for r in ry]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    rho = sxy / math.sqrt(sxx * syy)
    rho = max(-1.0, min(1.0, rho))

    if n <= EXACT_PERMUTATION_MAX_N:
        # Average ranks are multiples of 1/2, so doubled ranks are integers
        # and |rho_perm| >= |rho_obs| reduces to an exact integer test on
        # the dot product (the rank variances are permutation-invariant).
        u = [round(2 * r) for r in rx]
        v = [round(2 * r) for r in ry]
        center = n * (n + 1) ** 2
        observed = abs(sum(a * b for a, b in zip(u, v)) - center)
        hits, total = kernels.count_perm_dot_abs_ge(u, v, center, observed)
        return CorrelationResult(rho=rho, p_value=hits / total, n=n, method="exact_permutation")

    if 1.0 - rho * rho <= 0.0:
        p = 0.0
    else:
        t_stat = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = 2.0 * float(student_t.sf(abs(t_stat), n - 2))
        p = max(0.0, min(1.0, p))
    return CorrelationResult(rho=rho, p_value=p, n=n, method="t_approx")


def descriptives(values: list[float]) -> Descriptives:
    """n, mean, sample standard deviation, min and max of a non-empty list."""
    if not values:
        raise UndefinedMetricError("descriptives of an empty list")
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        sd = 0.0
    else:
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return Descriptives(n=n, mean=mean, sd=sd, min=min(values), max=max(values))


def unique_counts(values: list[float], precision: int = 2) -> tuple[int, int, float]:
    """(total, unique, pct): distinct count after rounding to `precision` decimals.

    pct is round(100 * unique / total), matching percentage-table style.
    """
    if not values:
        raise UndefinedMetricError("unique_counts of an empty list")
    rounded = {round(v, precision) for v in values}
    total = len(values)
    unique = len(rounded)
    return total, unique, float(round(100 * unique / total))


def correlate_runs(
    reports: list[MetricReport], x_field: str, y_field: str
) -> CorrelationResult:
    """Spearman correlation between two metric columns of a report list."""
    for name in (x_field, y_field):
        if name not in NUMERIC_FIELDS:
            raise ConfigError(
                f"unknown metric field {name!r}; choose from {', '.join(NUMERIC_FIELDS)}"
            )
    if len(reports) < 3:
        raise UndefinedCorrelationError(f"need at least 3 reports, got {len(reports)}")
    x = [float(getattr(r, x_field)) for r in reports]
    y = [float(getattr(r, y_field)) for r in reports]
    return spearman(x, y)


def format_p_value(p: float) -> str:
    """Four decimals, with a qualifier instead of a bare 0.0000."""
    if p < 1e-4:
        return "<0.0001"
    return f"{p:.4f}"
