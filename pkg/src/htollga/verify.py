"""Verification suites behind the CLI ``verify`` subcommand: sampler
goodness-of-fit, the lambda=1 composite-iteration equivalence, and the
brute-force oracle cross-checks."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from . import kernels, oracles, powerlaw, problems
from .harness import make_run_rng


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def chi_square_pvalue(observed, probs, n_samples, min_expected=10.0):
    """Pearson goodness-of-fit p-value with adjacent buckets merged until
    every expected count is at least ``min_expected``.

    ``observed`` are counts per support atom (in support order, the last
    entry collecting everything beyond); ``probs`` the matching expected
    probabilities (last entry is the tail mass).
    """
    buckets = []
    obs_acc = exp_acc = 0.0
    for o, p in zip(observed, probs):
        obs_acc += o
        exp_acc += p * n_samples
        if exp_acc >= min_expected:
            buckets.append((obs_acc, exp_acc))
            obs_acc = exp_acc = 0.0
    if exp_acc > 0 or obs_acc > 0:
        if buckets:
            o0, e0 = buckets[-1]
            buckets[-1] = (o0 + obs_acc, e0 + exp_acc)
        else:
            buckets.append((obs_acc, exp_acc))
    if len(buckets) < 2:
        raise ValueError("chi-square needs at least two buckets")
    chi2 = sum((o - e) ** 2 / e for o, e in buckets)
    df = len(buckets) - 1
    return float(gammaincc(df / 2.0, chi2 / 2.0))


def powerlaw_sample_gof(params, rng, n_samples=10**6, support_cap=4096):
    """Chi-square p-value of ``n_samples`` sampler draws against the pmf."""
    draws = powerlaw.sample_many(params, rng, n_samples)
    top = int(params.upper) if not params.is_infinite else support_cap
    top = min(top, support_cap)
    counts = np.bincount(np.minimum(draws, top + 1), minlength=top + 2)[1:]
    probs = [powerlaw.pmf(params, i) for i in range(1, top + 1)]
    tail = max(0.0, 1.0 - powerlaw.cdf(params, top))
    return chi_square_pvalue(counts, probs + [tail], n_samples)


# --- powerlaw suite ---------------------------------------------------------

GOF_CONFIGS = tuple((b, u) for b in (1.0, 2.0, 3.0) for u in (10, 1000)) + \
    tuple((b, powerlaw.INFINITE) for b in (1.5, 2.0, 3.0))


def suite_powerlaw(seed=20240901):
    out = []
    add = out.append

    c12 = powerlaw.normalization(powerlaw.PowerLawParams(1.0, 2))
    add(_check("powerlaw", "normalization_beta1_u2",
               abs(c12 - 2.0 / 3.0) <= 1e-12, f"C(1,2)={c12!r}"))
    cinf = powerlaw.normalization(powerlaw.PowerLawParams(2.0, powerlaw.INFINITE))
    add(_check("powerlaw", "normalization_beta2_inf",
               abs(cinf - 6.0 / math.pi**2) <= 1e-12, f"C(2,inf)={cinf!r}"))

    for beta in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
        for u in (1, 2, 7, 100, 4096):
            params = powerlaw.PowerLawParams(beta, u)
            total = sum(powerlaw.pmf(params, i) for i in range(1, u + 1))
            ok = abs(total - 1.0) <= 1e-12
            add(_check("powerlaw", f"pmf_sums_to_one(beta={beta},u={u})", ok,
                       f"sum={total!r}"))
            mid = max(1, u // 2)
            lhs = powerlaw.cdf(params, mid)
            rhs = powerlaw.normalization(params) * sum(
                float(j) ** -beta for j in range(1, mid + 1))
            add(_check("powerlaw", f"cdf_consistent(beta={beta},u={u})",
                       abs(lhs - rhs) <= 1e-12, f"|diff|={abs(lhs - rhs):.2e}"))

    for idx, (beta, u) in enumerate(GOF_CONFIGS):
        params = powerlaw.PowerLawParams(beta, u)
        rng = make_run_rng(seed + idx)
        p = powerlaw_sample_gof(params, rng, 10**6)
        add(_check("powerlaw", f"sampler_chi_square(beta={beta},u={u})",
                   p > 0.001, f"p={p:.6g}"))
        if not params.is_infinite:
            mean = powerlaw.expectation(params)
            m2 = powerlaw.second_moment(params)
            var = m2 - mean * mean
            draws = powerlaw.sample_many(params, make_run_rng(seed + 1000 + idx),
                                         10**6)
            se = math.sqrt(max(var, 0.0) / draws.shape[0])
            err = abs(float(draws.mean()) - mean)
            add(_check("powerlaw",
                       f"sampler_mean_4se(beta={beta},u={u})",
                       err <= max(4 * se, 1e-9), f"|err|={err:.3g} se={se:.3g}"))
    return out


# --- lambda=1 equivalence suite ---------------------------------------------


def suite_equivalence(seed=20240902, n=10, p=0.3, c=0.3, iters=10**6):
    out = []
    rng = make_run_rng(seed)
    hist = np.zeros(n + 1, dtype=np.int64)
    flips = np.zeros(n, dtype=np.int64)
    kernels.composite_hamming_counts(rng, n, p, c, iters, hist, flips)
    rate = p * c
    probs = [oracles.binom_pmf(n, rate, h) for h in range(n + 1)]
    pval = chi_square_pvalue(hist, probs, iters)
    out.append(_check("equivalence", "hamming_histogram_chi_square",
                      pval > 0.001, f"p={pval:.6g} vs Bin({n},{rate})"))
    se = math.sqrt(rate * (1 - rate) / iters)
    worst = max(abs(f / iters - rate) for f in flips)
    out.append(_check("equivalence", "per_position_flip_rate_4se",
                      worst <= 4 * se, f"max|err|={worst:.3g} se={se:.3g}"))
    table = oracles.composite_offspring_distribution(n, p, c)
    worst = max(abs(table[h] - probs[h]) for h in range(n + 1))
    out.append(_check("equivalence", "exact_table_matches_binomial",
                      worst <= 1e-12, f"max|diff|={worst:.2e}"))
    out.append(_check("equivalence", "exact_table_sums_to_one",
                      abs(sum(table) - 1.0) <= 1e-12, f"sum={sum(table)!r}"))
    return out


# --- oracle suite -----------------------------------------------------------


def exhaustive_min_spanning_weight(inst):
    """Minimum spanning-tree weight by enumerating every edge subset."""
    best = None
    m = inst.m
    for mask in range(1 << m):
        if bin(mask).count("1") != inst.n_v - 1:
            continue
        parent = list(range(inst.n_v))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        weight = 0
        for e in range(m):
            if mask >> e & 1:
                a, b, w = inst.edges[e]
                parent[find(a)] = find(b)
                weight += w
        if len({find(v) for v in range(inst.n_v)}) == 1:
            if best is None or weight < best:
                best = weight
    return best


def exhaustive_partition_optimum(inst):
    best = inst.total
    for mask in range(1 << inst.n):
        s = sum(w for i, w in enumerate(inst.weights) if mask >> i & 1)
        best = min(best, max(s, inst.total - s))
    return best


def suite_oracles(seed=20240903):
    out = []
    rng = make_run_rng(seed)

    ok = True
    detail = ""
    for rep in range(12):
        n_v = 3 + int(kernels.randint_below(rng, 4))  # 3..6
        max_m = n_v * (n_v - 1) // 2
        m = (n_v - 1) + int(kernels.randint_below(rng, max_m - n_v + 2))
        inst = problems.gen_random_mst_instance(n_v, m, 10, rng)
        got = oracles.kruskal_mst_weight(inst)
        ref = exhaustive_min_spanning_weight(inst)
        if got != ref:
            ok = False
            detail = f"n_v={n_v} m={m}: kruskal={got} exhaustive={ref}"
            break
    out.append(_check("oracles", "kruskal_vs_exhaustive(12 instances)", ok,
                      detail or "all equal"))

    ok = True
    detail = ""
    for rep in range(12):
        n = 2 + int(kernels.randint_below(rng, 15))  # 2..16
        inst = problems.gen_random_partition_instance(n, 50, rng)
        got = oracles.partition_optimum(inst)
        ref = exhaustive_partition_optimum(inst)
        if got != ref or not math.ceil(inst.total / 2) <= got <= inst.total:
            ok = False
            detail = f"n={n}: oracle={got} exhaustive={ref}"
            break
    out.append(_check("oracles", "partition_vs_exhaustive(12 instances)", ok,
                      detail or "all equal"))

    # p_pc: product equals the independent double-loop pmf summation
    pp = powerlaw.PowerLawParams(2.0, 100)
    probe = oracles.compute_p_pc((pp, pp), 10**4, 8)
    lo, hi = oracles.window_bounds(8)
    double = sum(powerlaw.pmf(pp, i) * powerlaw.pmf(pp, j)
                 for i in range(lo, hi + 1) for j in range(lo, hi + 1))
    out.append(_check("oracles", "p_pc_product_vs_double_loop",
                      abs(probe.p_pc - double) <= 1e-12,
                      f"|diff|={abs(probe.p_pc - double):.2e}"))

    # scaling trend: p_pc(k) * k within a mutual factor of 4
    vals = [oracles.compute_p_pc((pp, pp), 10**4, k).p_pc * k
            for k in (2, 4, 8, 16, 32)]
    ratio = max(vals) / min(vals)
    out.append(_check("oracles", "p_pc_scaling_trend_factor4", ratio <= 4.0,
                      f"max/min={ratio:.3f}"))

    # window is nonempty for every k >= 2
    ok = all(oracles.window_bounds(k)[0] <= oracles.window_bounds(k)[1]
             for k in range(2, 10**4 + 1))
    out.append(_check("oracles", "window_nonempty(k in 2..1e4)", ok, ""))

    for n, p, c in ((6, 0.5, 0.4), (10, 0.3, 0.3), (12, 0.9, 0.1)):
        table = oracles.composite_offspring_distribution(n, p, c)
        s = sum(table)
        out.append(_check("oracles", f"composite_table_sums_to_one(n={n})",
                          abs(s - 1.0) <= 1e-12, f"sum={s!r}"))
    return out


SUITES = {
    "powerlaw": suite_powerlaw,
    "equivalence": suite_equivalence,
    "oracles": suite_oracles,
}


def _check(suite, name, passed, detail):
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


def run_suites(names):
    results = []
    for name in names:
        results.extend(SUITES[name]())
    return all(r.passed for r in results), results
