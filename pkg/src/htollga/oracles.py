"""Independent brute-force references: exact MST weight, exact partition
optimum, the finite-n jump-window probability, and the exact lambda=1
composite offspring distribution."""

import math
from dataclasses import dataclass

from . import powerlaw


def kruskal_mst_weight(inst):
    """Weight of a minimum spanning tree of the instance graph."""
    parent = list(range(inst.n_v))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    total = 0
    picked = 0
    for a, b, w in sorted(inst.edges, key=lambda e: e[2]):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            total += w
            picked += 1
            if picked == inst.n_v - 1:
                break
    if picked != inst.n_v - 1:
        raise ValueError("graph is not connected")
    return total


PARTITION_EXHAUSTIVE_MAX_N = 16
PARTITION_MITM_MAX_N = 24
PARTITION_TABLE_MAX_W = 10**6


def partition_optimum(inst):
    """Minimal achievable heavier-bin weight.

    Exhaustive enumeration for n <= 16, meet-in-the-middle for n <= 24,
    subset-sum bitset for total weight <= 1e6; larger instances are
    rejected.
    """
    n, total = inst.n, inst.total
    if n <= PARTITION_EXHAUSTIVE_MAX_N:
        return _partition_exhaustive(inst.weights, total)
    if n <= PARTITION_MITM_MAX_N:
        return _partition_mitm(inst.weights, total)
    if total <= PARTITION_TABLE_MAX_W:
        return _partition_bitset(inst.weights, total)
    raise ValueError(
        f"partition instance too large for the exact oracle "
        f"(n={n} > {PARTITION_MITM_MAX_N} and total weight {total} > "
        f"{PARTITION_TABLE_MAX_W})")


def _heavier(s, total):
    return max(s, total - s)


def _partition_exhaustive(weights, total):
    best = total
    sums = [0]
    for w in weights:
        sums = sums + [s + w for s in sums]
    for s in sums:
        h = _heavier(s, total)
        if h < best:
            best = h
    return best


def _partition_mitm(weights, total):
    half = len(weights) // 2
    left, right = weights[:half], weights[half:]

    def subset_sums(ws):
        sums = [0]
        for w in ws:
            sums = sums + [s + w for s in sums]
        return sorted(set(sums))

    ls = subset_sums(left)
    rs = subset_sums(right)
    import bisect

    best = total
    target = total / 2.0
    for s in ls:
        # closest right sums around target - s
        idx = bisect.bisect_left(rs, target - s)
        for j in (idx - 1, idx):
            if 0 <= j < len(rs):
                h = _heavier(s + rs[j], total)
                if h < best:
                    best = h
    return best


def _partition_bitset(weights, total):
    reachable = 1
    for w in weights:
        reachable |= reachable << w
    half = total // 2
    mask = (1 << (half + 1)) - 1
    lower = reachable & mask
    best_low = lower.bit_length() - 1  # largest reachable sum <= total/2
    return total - best_low


@dataclass(frozen=True)
class TheoryProbe:
    """Finite-n evaluation of the jump-window probability.

    ``p_single_param`` is the probability that one scaled parameter lands in
    [sqrt(k/n), sqrt(2k/n)]; ``p_pc`` is the product for the independent
    mutation-rate and crossover-bias draws.  ``hyper`` echoes the queried
    parameterization.
    """

    n: int
    k: int
    p_window: float
    c_window: float
    hyper: object = None

    @property
    def p_single_param(self):
        return self.p_window

    @property
    def p_pc(self):
        return self.p_window * self.c_window


def window_bounds(k):
    """Integer window [ceil(sqrt(k)) .. floor(sqrt(2k))] of scaled values
    i such that i/sqrt(n) lies in [sqrt(k/n), sqrt(2k/n)]."""
    lo = math.isqrt(k - 1) + 1 if k > 1 else 1
    hi = math.isqrt(2 * k)
    return lo, hi


def _window_probability(params, k):
    lo, hi = window_bounds(k)
    return sum(powerlaw.pmf(params, i) for i in range(lo, hi + 1))


def compute_p_pc(hyper, n, k):
    """Probability that both the scaled mutation rate and crossover bias
    fall into the jump window [sqrt(k/n), sqrt(2k/n)].

    ``hyper`` is either an :class:`htollga.engine.HyperParams` or a plain
    ``(p_params, c_params)`` pair of power laws.  Requires supports reaching
    sqrt(2k) so the window is available to both draws.
    """
    if k < 2:
        raise ValueError(f"jump size must be >= 2, got {k}")
    if hasattr(hyper, "p_dist"):
        p_params, c_params = hyper.p_dist(n), hyper.c_dist(n)
    else:
        p_params, c_params = hyper
    for name, params in (("p", p_params), ("c", c_params)):
        if not params.is_infinite and params.upper ** 2 < 2 * k:
            raise ValueError(
                f"u_{name}={params.upper} < sqrt(2k) for k={k}: the window "
                f"is out of reach")
    return TheoryProbe(n=n, k=k,
                       p_window=_window_probability(p_params, k),
                       c_window=_window_probability(c_params, k),
                       hyper=hyper)


def binom_pmf(n, p, k):
    """Exact-combinatorics binomial pmf (float result)."""
    if not 0 <= k <= n:
        return 0.0
    return float(math.comb(n, k)) * p**k * (1.0 - p) ** (n - k)


def composite_offspring_distribution(n, p, c):
    """Exact distribution of the Hamming distance H(x, y) after one
    lambda=1 iteration: ell ~ Bin(n, p) positions are flipped in the single
    mutant, then each flipped position is inherited with probability c.

    Returns a list of n+1 probabilities; provably equals Bin(n, p*c).
    """
    if n > 12:
        raise ValueError(f"exact composite table is meant for n <= 12, got {n}")
    table = [0.0] * (n + 1)
    for ell in range(n + 1):
        w = binom_pmf(n, p, ell)
        for h in range(ell + 1):
            table[h] += w * binom_pmf(ell, c, h)
    return table
