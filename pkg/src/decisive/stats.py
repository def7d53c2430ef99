"""Shared statistics: demonstration-test confidence, IQR filtering, Mann-Whitney U."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .errors import EmptySample, InvalidP0, TooFewValues

#: exact enumeration is used up to this per-group size; C(16, 8) = 12870 labelings
EXACT_LIMIT = 8


@dataclass(frozen=True)
class CompletionResult:
    successes: int
    failures: int
    rate: float
    confidence_at: tuple[tuple[float, float], ...] = ()


def completion_rate(successes: int, failures: int) -> CompletionResult:
    total = successes + failures
    if total < 1:
        raise EmptySample("no trials")
    return CompletionResult(successes, failures, successes / total)


def completion_confidence(successes: int, failures: int, p0: float) -> float:
    """Confidence that the true success probability is at least p0.

    Binomial demonstration-test form: with n = successes + failures trials and
    f observed failures, confidence = 1 - sum_{k=0..f} C(n,k) (1-p0)^k p0^(n-k).
    Ten clean trials against p0 = 0.85 give 0.803; five against 0.70 give 0.832.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidP0(f"p0 must be inside (0, 1), got {p0}")
    n = successes + failures
    if n < 1:
        raise EmptySample("no trials")
    acceptance = sum(
        math.comb(n, k) * (1.0 - p0) ** k * p0 ** (n - k) for k in range(failures + 1)
    )
    return 1.0 - acceptance


def quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    """(Q1, median, Q3) by linear interpolation at positions (n+1)/4, (n+1)/2, 3(n+1)/4.

    The interpolation rule is fixed here so downstream outlier filtering is
    reproducible bit for bit.
    """
    data = sorted(float(v) for v in values)
    n = len(data)
    if n == 0:
        raise EmptySample("no values")

    def at(pos: float) -> float:
        # 1-based fractional position, clamped to the data range
        pos = min(max(pos, 1.0), float(n))
        lo = int(math.floor(pos))
        frac = pos - lo
        if frac == 0.0 or lo >= n:
            return data[lo - 1]
        return data[lo - 1] + frac * (data[lo] - data[lo - 1])

    return at((n + 1) / 4.0), at((n + 1) / 2.0), at(3.0 * (n + 1) / 4.0)


def iqr_filter(values: Sequence[float]) -> tuple[list[float], list[float], Optional[str]]:
    """Split values into (kept, removed) by the 1.5 IQR fence rule.

    Removed values fall strictly outside [Q1 - 1.5R, Q3 + 1.5R] with R = Q3 - Q1.
    A warning string is returned when more than 10% of the inputs were removed,
    the recommended limit before growing the participant pool.
    """
    vals = [float(v) for v in values]
    if len(vals) < 4:
        raise TooFewValues("IQR filtering needs at least 4 values")
    q1, _, q3 = quartiles(vals)
    r = q3 - q1
    lo, hi = q1 - 1.5 * r, q3 + 1.5 * r
    kept = [v for v in vals if lo <= v <= hi]
    removed = [v for v in vals if v < lo or v > hi]
    warning = None
    if len(removed) > 0.10 * len(vals):
        warning = (
            f"IQR rule removed {len(removed)}/{len(vals)} values (>10%); "
            "consider collecting more data"
        )
    return kept, removed, warning


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    p_two_sided: float
    method: str  # exact | normal


def _midranks(pooled: Sequence[float]) -> list[float]:
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def mann_whitney(a: Sequence[float], b: Sequence[float]) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test with midrank ties.

    U = min(U_a, U_b). For min(n1, n2) <= EXACT_LIMIT the p-value is exact:
    all C(n1+n2, n1) group labelings of the pooled midranks are enumerated and
    the one-sided tail P(U_a <= u) is doubled (capped at 1). Larger samples
    use the tie-corrected normal approximation with a 0.5 continuity
    correction.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise EmptySample("both samples must be non-empty")

    pooled = a + b
    ranks = _midranks(pooled)
    rank_sum_a = sum(ranks[:n1])
    u_a = rank_sum_a - n1 * (n1 + 1) / 2.0
    u_b = n1 * n2 - u_a
    u = min(u_a, u_b)

    if min(n1, n2) <= EXACT_LIMIT:
        total = math.comb(n1 + n2, n1)
        tail = sum(
            1
            for idx in combinations(range(n1 + n2), n1)
            if sum(ranks[i] for i in idx) - n1 * (n1 + 1) / 2.0 <= u + 1e-12
        )
        p = min(1.0, 2.0 * tail / total)
        return MannWhitneyResult(u, p, "exact")

    # normal approximation with tie correction
    n = n1 + n2
    tie_term = 0.0
    seen = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return MannWhitneyResult(u, 1.0, "normal")
    z = (u - n1 * n2 / 2.0 + 0.5) / math.sqrt(var)
    p = min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))
    return MannWhitneyResult(u, p, "normal")


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation; std is 0 for a single value."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptySample("no values")
    m = sum(vals) / len(vals)
    if len(vals) == 1:
        return m, 0.0
    var = sum((v - m) ** 2 for v in vals) / (len(vals) - 1)
    return m, math.sqrt(var)


def welch_t(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Welch's unequal-variance t statistic and two-sided p.

    A convenience column for survey reports; the rank test remains the
    primary comparison for Likert data.
    """
    if len(a) < 2 or len(b) < 2:
        raise EmptySample("Welch's t needs at least two values per side")
    m1, s1 = mean_std(a)
    m2, s2 = mean_std(b)
    v1, v2 = s1**2 / len(a), s2**2 / len(b)
    se2 = v1 + v2
    if se2 == 0.0:
        return 0.0, 1.0
    t = (m1 - m2) / math.sqrt(se2)
    df = se2**2 / (v1**2 / (len(a) - 1) + v2**2 / (len(b) - 1))
    return t, min(1.0, 2.0 * _student_t_sf(abs(t), df))


def _student_t_sf(t: float, df: float) -> float:
    # sf(t) = 0.5 * I_x(df/2, 1/2) with x = df / (df + t^2)
    x = df / (df + t * t)
    return 0.5 * _reg_inc_beta(df / 2.0, 0.5, x)


def _reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    # the continued fraction converges fastest below this pivot
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete-beta continued fraction
    eps, fpmin = 3e-15, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, 201):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h
