"""Paired statistical comparisons gated by a Shapiro-Wilk normality check.

Differences that pass the normality gate (p > alpha) are compared with a
paired t-test; otherwise with the Wilcoxon signed-rank test, reported as
a z statistic (tie-corrected normal approximation, no continuity
correction) plus the exact two-sided p from full sign enumeration when
the sample is small enough to enumerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import stats as sps

EXACT_ENUMERATION_LIMIT = 12  # 2^n sign assignments enumerated up to here


class StatsInputError(ValueError):
    pass


class DegenerateSampleError(StatsInputError):
    """All paired differences are zero (or otherwise varianceless)."""


class TestKind(str, Enum):
    PAIRED_T = "paired-t"
    WILCOXON = "wilcoxon"


@dataclass(frozen=True)
class PairedSample:
    labels: tuple[str, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.labels) == len(self.a) == len(self.b)):
            raise StatsInputError("labels, a, and b must have equal lengths")
        if any(math.isnan(v) or math.isinf(v) for v in (*self.a, *self.b)):
            raise StatsInputError("paired samples must be finite")

    @classmethod
    def of(cls, a, b, labels=None) -> "PairedSample":
        a = tuple(float(v) for v in a)
        b = tuple(float(v) for v in b)
        if labels is None:
            labels = tuple(f"s{i}" for i in range(len(a)))
        return cls(tuple(labels), a, b)

    def differences(self) -> tuple[float, ...]:
        return tuple(x - y for x, y in zip(self.a, self.b))


@dataclass(frozen=True)
class TestResult:
    test: TestKind
    statistic: float
    df: int | None
    p_two_sided: float
    n: int
    exact_p: float | None = None  # wilcoxon, n <= enumeration limit
    w_plus: float | None = None  # wilcoxon signed-rank sum
    normality_w: float | None = None  # set when chosen through the gate
    normality_p: float | None = None

    def __post_init__(self) -> None:
        if (self.df is not None) != (self.test is TestKind.PAIRED_T):
            raise StatsInputError("df is present exactly for the paired t-test")
        if not 0.0 <= self.p_two_sided <= 1.0:
            raise StatsInputError("p must lie in [0, 1]")


def shapiro_wilk(x) -> tuple[float, float]:
    """W statistic and p-value (Royston's approximation) for 3 <= n <= 5000."""
    values = [float(v) for v in x]
    n = len(values)
    if n < 3:
        raise StatsInputError("Shapiro-Wilk needs at least 3 observations")
    if n > 5000:
        raise StatsInputError("Shapiro-Wilk approximation is valid up to n = 5000")
    if max(values) == min(values):
        raise DegenerateSampleError("Shapiro-Wilk is undefined for constant samples")
    w, p = sps.shapiro(values)
    return float(w), float(p)


def paired_t(sample: PairedSample) -> TestResult:
    d = sample.differences()
    n = len(d)
    if n < 2:
        raise StatsInputError("paired t-test needs at least 2 pairs")
    mean = sum(d) / n
    var = sum((v - mean) ** 2 for v in d) / (n - 1)
    if var == 0.0:
        raise DegenerateSampleError("zero-variance differences")
    t = mean / math.sqrt(var / n)
    df = n - 1
    p = float(2.0 * sps.t.sf(abs(t), df))
    return TestResult(test=TestKind.PAIRED_T, statistic=t, df=df, p_two_sided=p, n=n)


def _average_ranks(values: tuple[float, ...]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def wilcoxon_signed_rank(sample: PairedSample) -> TestResult:
    """Signed ranks with average ranks for ties; z plus exact enumeration p."""
    d = [v for v in sample.differences() if v != 0.0]
    if not d:
        raise DegenerateSampleError("all paired differences are zero")
    n = len(d)
    if n < 3:
        raise StatsInputError("Wilcoxon needs at least 3 nonzero differences")
    magnitudes = tuple(abs(v) for v in d)
    ranks = _average_ranks(magnitudes)
    w_plus = sum(r for r, v in zip(ranks, d) if v > 0)

    mu = n * (n + 1) / 4.0
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0
    # tie correction over groups of equal |d|
    seen: dict[float, int] = {}
    for m in magnitudes:
        seen[m] = seen.get(m, 0) + 1
    sigma2 -= sum(t**3 - t for t in seen.values()) / 48.0
    if sigma2 <= 0.0:
        raise DegenerateSampleError("tie-corrected variance is zero")
    z = (w_plus - mu) / math.sqrt(sigma2)
    p_normal = float(2.0 * sps.norm.sf(abs(z)))
    p_normal = min(1.0, p_normal)

    exact_p = None
    if n <= EXACT_ENUMERATION_LIMIT:
        exact_p = _exact_two_sided_p(ranks, w_plus)

    return TestResult(
        test=TestKind.WILCOXON,
        statistic=z,
        df=None,
        p_two_sided=p_normal,
        n=n,
        exact_p=exact_p,
        w_plus=w_plus,
    )


def _exact_two_sided_p(ranks: list[float], w_obs: float) -> float:
    """Enumerate all 2^n sign assignments of the observed ranks."""
    n = len(ranks)
    total = 1 << n
    eps = 1e-9
    le = 0
    ge = 0
    for mask in range(total):
        w = 0.0
        m = mask
        i = 0
        while m:
            if m & 1:
                w += ranks[i]
            m >>= 1
            i += 1
        if w <= w_obs + eps:
            le += 1
        if w >= w_obs - eps:
            ge += 1
    return min(1.0, 2.0 * min(le, ge) / total)


def gated_compare(sample: PairedSample, alpha: float = 0.05) -> TestResult:
    """Shapiro-Wilk on the differences decides between t-test and Wilcoxon."""
    d = sample.differences()
    w, p = shapiro_wilk(d)
    if p > alpha:
        result = paired_t(sample)
    else:
        result = wilcoxon_signed_rank(sample)
    return TestResult(
        test=result.test,
        statistic=result.statistic,
        df=result.df,
        p_two_sided=result.p_two_sided,
        n=result.n,
        exact_p=result.exact_p,
        w_plus=result.w_plus,
        normality_w=w,
        normality_p=p,
    )
