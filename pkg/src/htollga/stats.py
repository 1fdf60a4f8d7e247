"""Descriptive statistics and the two hypothesis tests used to compare
algorithm runtimes: the pooled-variance two-sample Student's t-test and the
two-sided Wilcoxon rank-sum test (exact for small samples, normal
approximation with mid-rank ties, tie-corrected variance and continuity
correction otherwise)."""

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.special import betainc

STUDENT_T = "student_t"
WILCOXON_EXACT = "wilcoxon_exact"
WILCOXON_NORMAL = "wilcoxon_normal_approx"

# exact Wilcoxon only when the smaller sample has at most this many
# observations and the number of group assignments stays enumerable
EXACT_MAX_MIN_COUNT = 12
EXACT_MAX_ARRANGEMENTS = 10**7

_P_FLOOR = 1e-300


@dataclass(frozen=True)
class SampleSummary:
    count: int
    mean: float
    std: float
    min: float
    max: float


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    degenerate: bool = False

    def render_p(self):
        """Human-readable p-value; tiny tail masses underflow the double
        range and are reported as a bound."""
        if 0.0 < self.p_value < _P_FLOOR:
            return "<1e-300"
        if self.p_value == 0.0 and self.degenerate:
            return "0"
        if self.p_value < _P_FLOOR:
            return "<1e-300"
        return repr(self.p_value)


def summarize(samples):
    """Count, mean, sample standard deviation (n-1 denominator; 0 for a
    single observation), min and max."""
    xs = [float(v) for v in samples]
    if not xs:
        raise ValueError("cannot summarize an empty sample")
    n = len(xs)
    mean = math.fsum(xs) / n
    if n == 1:
        std = 0.0
    else:
        var = math.fsum((v - mean) ** 2 for v in xs) / (n - 1)
        std = math.sqrt(var)
    return SampleSummary(count=n, mean=mean, std=std, min=min(xs), max=max(xs))


def _student_t_sf2(t, df):
    """Two-sided tail probability of Student's t via the regularized
    incomplete beta function (relative error well below the documented
    1e-9)."""
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def t_test_two_sample(a, b):
    """Pooled-variance two-sample Student's t-test, two-sided.

    Zero pooled variance is degenerate: p = 1 for equal means, p = 0
    otherwise (flagged).
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("t-test needs at least two observations per sample")
    sa = summarize(a)
    sb = summarize(b)
    df = na + nb - 2
    pooled = ((na - 1) * sa.std**2 + (nb - 1) * sb.std**2) / df
    if pooled == 0.0:
        if sa.mean == sb.mean:
            return TestResult(0.0, 1.0, STUDENT_T, degenerate=True)
        return TestResult(math.inf if sa.mean > sb.mean else -math.inf,
                          0.0, STUDENT_T, degenerate=True)
    t = (sa.mean - sb.mean) / math.sqrt(pooled * (1.0 / na + 1.0 / nb))
    return TestResult(t, _student_t_sf2(t, df), STUDENT_T)


def _midranks(pooled):
    """Ranks 1..N with ties sharing their average rank, scaled by 2 so all
    ranks are integers."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    scaled = [0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        # ranks i+1 .. j+1 share average (i+j+2)/2; doubled: i+j+2
        for idx in range(i, j + 1):
            scaled[order[idx]] = i + j + 2
        i = j + 1
    return scaled


def _exact_applicable(na, nb):
    if min(na, nb) > EXACT_MAX_MIN_COUNT:
        return False
    return math.comb(na + nb, na) <= EXACT_MAX_ARRANGEMENTS


def _exact_ranksum_p(scaled, na, observed):
    """Exact two-sided p of the rank-sum under the permutation null.

    Dynamic program over the multiset of (doubled) ranks: ``counts[c][s]``
    counts c-element subsets with doubled-rank sum s; exact integer
    arithmetic throughout.
    """
    total_sum = sum(scaled)
    max_s = total_sum
    counts = [[0] * (max_s + 1) for _ in range(na + 1)]
    counts[0][0] = 1
    for r in scaled:
        for c in range(min(na, len(scaled)) - 1, -1, -1):
            row = counts[c]
            nxt = counts[c + 1]
            for s in range(max_s - r, -1, -1):
                v = row[s]
                if v:
                    nxt[s + r] += v
    dist = counts[na]
    total = sum(dist)
    le = sum(v for s, v in enumerate(dist) if s <= observed)
    ge = sum(v for s, v in enumerate(dist) if s >= observed)
    p = 2 * Fraction(min(le, ge), total)
    return float(min(p, Fraction(1)))


def _phi_tail2(z):
    """Two-sided standard normal tail probability 2*P[Z >= |z|]."""
    return math.erfc(abs(z) / math.sqrt(2.0))


def wilcoxon_rank_sum(a, b, method=None):
    """Two-sided Wilcoxon rank-sum test.

    Exact permutation distribution (mid-rank ties included) when the smaller
    sample has at most 12 observations and at most 1e7 group assignments
    exist; otherwise the normal approximation with mid-rank ties,
    tie-corrected variance and continuity correction.  ``method`` may force
    ``"exact"`` or ``"normal"`` (used to cross-validate the two paths).
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise ValueError("rank-sum test needs nonempty samples")
    pooled = a + b
    scaled = _midranks(pooled)
    observed = sum(scaled[:na])  # doubled rank sum of sample a
    if method not in (None, "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    use_exact = (_exact_applicable(na, nb) if method is None
                 else method == "exact")
    if use_exact:
        p = _exact_ranksum_p(scaled, na, observed)
        return TestResult(observed / 2.0, p, WILCOXON_EXACT)
    n = na + nb
    mu = na * (n + 1)  # doubled scale
    tie_term = 0.0
    i = 0
    svals = sorted(pooled)
    while i < n:
        j = i
        while j + 1 < n and svals[j + 1] == svals[i]:
            j += 1
        t = j - i + 1
        tie_term += t**3 - t
        i = j + 1
    var = (na * nb / 12.0) * ((n + 1) - tie_term / (n * (n - 1.0)))
    var *= 4.0  # doubled scale
    if var <= 0.0:
        return TestResult(observed / 2.0, 1.0, WILCOXON_NORMAL, degenerate=True)
    diff = observed - mu
    # continuity correction: half a doubled-rank step toward the mean
    if diff > 0:
        diff -= 1.0
    elif diff < 0:
        diff += 1.0
    z = diff / math.sqrt(var)
    return TestResult(observed / 2.0, _phi_tail2(z), WILCOXON_NORMAL)


def normalize_runtime(value, n):
    """Runtime divided by n*ln(n) (the scaling used for plotting OneMax
    runtimes)."""
    if n < 2:
        raise ValueError(f"normalization needs n >= 2, got {n}")
    return value / (n * math.log(n))
