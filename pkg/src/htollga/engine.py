"""The heavy-tailed (1+(lambda,lambda)) GA, a static-parameter variant, and
the (1+1) EA baseline, with exact fitness-evaluation accounting.

Each iteration of the GA samples the population size lambda, the mutation
rate p and the crossover bias c fresh: lambda from pow(beta_lambda,
u_lambda), p and c from pow(beta_p, u_p) / sqrt(n) and pow(beta_c, u_c) /
sqrt(n).  The mutation phase flips the same Binomial(n, p) number of
uniformly chosen distinct positions in each of lambda mutants and keeps the
best; the crossover phase creates lambda offspring taking each bit from the
mutation winner with probability c, keeps the best, and replaces the parent
if the winner's fitness is not worse.  One iteration costs exactly
2*lambda evaluations.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, powerlaw, problems
from .powerlaw import INFINITE, PowerLawParams

# symbolic bounding that resolves to floor(sqrt(n)) at run start
SQRT_N = "sqrt_n"


@dataclass(frozen=True)
class HyperParams:
    """The six distribution hyperparameters of the heavy-tailed GA.

    Upper bounds may be a positive integer, ``INFINITE``, or the symbolic
    ``SQRT_N``; bounds for p and c must not exceed floor(sqrt(n)) once
    resolved.
    """

    beta_lambda: float
    u_lambda: object
    beta_p: float
    u_p: object
    beta_c: float
    u_c: object

    def _resolve_u(self, u, n):
        if u == SQRT_N:
            return math.isqrt(n)
        return u

    def lambda_dist(self, n):
        return PowerLawParams(self.beta_lambda, self._resolve_u(self.u_lambda, n))

    def p_dist(self, n):
        return self._scaled_dist("u_p", self.beta_p, self.u_p, n)

    def c_dist(self, n):
        return self._scaled_dist("u_c", self.beta_c, self.u_c, n)

    def _scaled_dist(self, name, beta, u, n):
        u = self._resolve_u(u, n)
        root = math.isqrt(n)
        if u == INFINITE or u > root:
            raise ValueError(
                f"{name}={u} exceeds floor(sqrt(n))={root}: the scaled "
                f"parameter must stay in (0, 1]")
        return PowerLawParams(beta, u)


def recommended_hyperparams():
    """The layman setting: almost unbounded ranges, exponents slightly above
    two for the population size and slightly above one for the rest."""
    return HyperParams(beta_lambda=2.5, u_lambda=INFINITE,
                       beta_p=1.1, u_p=SQRT_N,
                       beta_c=1.1, u_c=SQRT_N)


@dataclass(frozen=True)
class IterationParams:
    """One iteration's sampled parameters."""

    lam: int
    p: float
    c: float
    ell: int


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run.

    ``evaluations`` counts every generated offspring; ``best_fitness`` is
    the final fitness in raw problem orientation (minimized value for MST /
    partition).
    """

    iterations: int
    evaluations: int
    success: bool
    best_fitness: int
    seed: int = 0


def sample_iteration_params(hyper, n, rng):
    """Draw (p, c, lambda, ell) exactly as one GA iteration does."""
    p_tab = powerlaw.cdf_table(hyper.p_dist(n))
    c_tab = powerlaw.cdf_table(hyper.c_dist(n))
    lam_dist = hyper.lambda_dist(n)
    root = math.sqrt(n)
    xp = int(kernels.powerlaw_from_cdf(rng, p_tab))
    xc = int(kernels.powerlaw_from_cdf(rng, c_tab))
    lam = powerlaw.sample(lam_dist, rng)
    p = xp / root
    c = xc / root
    ell = int(rng.binomial(n, p))
    return IterationParams(lam=lam, p=p, c=c, ell=ell)


class _Scratch:
    """Per-run kernel buffers (index permutation slots, flip marks,
    position double-buffers, union-find)."""

    def __init__(self, problem):
        n = problem.dimension
        self.uf = np.zeros(problem.mst.n_v if problem.kind == problems.MST else 0,
                           dtype=np.int64)
        self.mark_epoch = np.zeros(n, dtype=np.int64)
        self.mpos = np.zeros(n, dtype=np.int64)
        self.mbest = np.zeros(n, dtype=np.int64)
        self.cpos = np.zeros(n, dtype=np.int64)
        self.cbest = np.zeros(n, dtype=np.int64)
        self.idx = np.zeros(n, dtype=np.int64)


_NO_TRACE = np.zeros(0, dtype=np.int64)
_DUMMY_CDF = np.array([1.0])


def _optimum(problem):
    opt = problem.internal_optimum()
    if opt is None:
        return False, np.int64(0)
    return True, np.int64(opt)


def _check_budget(budget):
    budget = int(budget)
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    if budget > 2**62:
        raise ValueError(f"budget {budget} exceeds the 2**62 accounting range")
    return budget


def _trace_arrays(trace):
    if trace is None:
        return _NO_TRACE, _NO_TRACE
    cap = int(trace.get("capacity", 0))
    trace["lambda"] = np.zeros(cap, dtype=np.int64)
    trace["fitness"] = np.zeros(cap, dtype=np.int64)
    return trace["lambda"], trace["fitness"]


def _lambda_sampling(lam_dist):
    """Kernel arguments for the lambda draw: CDF table or rejection."""
    if lam_dist.uses_table:
        return True, powerlaw.cdf_table(lam_dist), 0.0, 0.0
    return False, _DUMMY_CDF, lam_dist.beta, powerlaw.rejection_upper(lam_dist)


def ht_ollga_run(problem, hyper, init_mode, budget, rng, seed=0, trace=None):
    """One run of the heavy-tailed (1+(lambda,lambda)) GA.

    Stops with success when the current individual reaches a known optimum,
    or with failure when the evaluation budget is exhausted (a final partial
    iteration is charged for the offspring it actually generated).
    """
    n = problem.dimension
    budget = _check_budget(budget)
    p_tab = powerlaw.cdf_table(hyper.p_dist(n))
    c_tab = powerlaw.cdf_table(hyper.c_dist(n))
    lam_by_table, lam_cdf, lam_beta, lam_upper = _lambda_sampling(hyper.lambda_dist(n))
    x = problems.init_point(init_mode, problem, rng)
    s = _Scratch(problem)
    opt_known, opt_fit = _optimum(problem)
    tl, tf = _trace_arrays(trace)
    it, ev, success, fit = kernels.ga_run_kernel(
        rng, problems.kernel_payload(problem), x.words,
        opt_known, opt_fit, np.int64(budget),
        False, np.int64(1), 0.0, 0.0,
        p_tab, c_tab, lam_by_table, lam_cdf, lam_beta, lam_upper,
        math.sqrt(n), s.uf,
        s.mark_epoch,
        s.mpos, s.mbest, s.cpos, s.cbest, s.idx, tl, tf)
    return RunResult(int(it), int(ev), bool(success),
                     problem.raw_value(int(fit)), seed)


def static_ollga_run(problem, lam, init_mode, budget, rng, p=None, c=None,
                     seed=0, trace=None):
    """(1+(lambda,lambda)) GA with fixed lambda, p, c for the whole run
    (ell is still resampled from Bin(n, p) each iteration).

    Defaults follow the standard setting p = lambda/n, c = 1/lambda.
    """
    n = problem.dimension
    budget = _check_budget(budget)
    lam = int(lam)
    if not 1 <= lam <= n // 2:
        raise ValueError(f"static population size must satisfy 1 <= lambda <= n/2, "
                         f"got {lam} with n={n}")
    if p is None:
        p = lam / n
    if c is None:
        c = 1.0 / lam
    if not 0.0 < p <= 1.0:
        raise ValueError(f"mutation rate must be in (0, 1], got {p}")
    if not 0.0 < c <= 1.0:
        raise ValueError(f"crossover bias must be in (0, 1], got {c}")
    x = problems.init_point(init_mode, problem, rng)
    s = _Scratch(problem)
    opt_known, opt_fit = _optimum(problem)
    tl, tf = _trace_arrays(trace)
    it, ev, success, fit = kernels.ga_run_kernel(
        rng, problems.kernel_payload(problem), x.words,
        opt_known, opt_fit, np.int64(budget),
        True, np.int64(lam), float(p), float(c),
        _DUMMY_CDF, _DUMMY_CDF, True, _DUMMY_CDF, 0.0, 0.0,
        math.sqrt(n), s.uf,
        s.mark_epoch,
        s.mpos, s.mbest, s.cpos, s.cbest, s.idx, tl, tf)
    return RunResult(int(it), int(ev), bool(success),
                     problem.raw_value(int(fit)), seed)


def one_plus_one_ea_run(problem, init_mode, budget, rng, mutation_rate=None,
                        seed=0, trace=None):
    """(1+1) EA: flip each bit independently at the mutation rate (default
    1/n), accept iff the fitness does not decrease; one evaluation per
    iteration."""
    n = problem.dimension
    budget = _check_budget(budget)
    if mutation_rate is None:
        mutation_rate = 1.0 / n
    if not 0.0 < mutation_rate <= 1.0:
        raise ValueError(f"mutation rate must be in (0, 1], got {mutation_rate}")
    x = problems.init_point(init_mode, problem, rng)
    s = _Scratch(problem)
    opt_known, opt_fit = _optimum(problem)
    tl, tf = _trace_arrays(trace)
    it, ev, success, fit = kernels.ea_run_kernel(
        rng, problems.kernel_payload(problem), x.words,
        opt_known, opt_fit, np.int64(budget), float(mutation_rate), s.uf,
        s.mark_epoch, s.mpos, tl, tf)
    return RunResult(int(it), int(ev), bool(success),
                     problem.raw_value(int(fit)), seed)


def mutation_phase(x, lam, ell, problem, rng):
    """Generate lambda mutants of ``x`` (each flipping the same ``ell``
    uniformly chosen distinct positions), streaming, and return
    ``(winner, winner_raw_fitness, evaluations)``.
    """
    if not 0 <= ell <= x.n:
        raise ValueError(f"ell must be in [0..n], got {ell}")
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    payload = problems.kernel_payload(problem)
    s = _Scratch(problem)
    _fit, aux = kernels.eval_full(payload, x.words, s.uf)
    best_fit, _epoch = kernels.mutation_phase_kernel(
        rng, payload, x.words, aux, np.int64(ell), np.int64(lam), s.uf,
        s.mark_epoch, np.int64(0), s.mpos, s.mbest)
    winner = x.copy()
    for t in range(ell):
        kernels.bit_flip(winner.words, int(s.mbest[t]))
    return winner, problem.raw_value(int(best_fit)), lam


def crossover_phase(x, x_prime, lam, c, problem, rng):
    """Generate lambda biased-crossover offspring of ``x`` and ``x_prime``
    (each bit from ``x_prime`` with probability c), streaming, and return
    ``(winner, winner_raw_fitness, evaluations)``.
    """
    if x.n != x_prime.n:
        raise ValueError(f"length mismatch: {x.n} vs {x_prime.n}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"crossover bias must be in [0, 1], got {c}")
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    payload = problems.kernel_payload(problem)
    s = _Scratch(problem)
    diff = [i for i in range(x.n) if x.get(i) != x_prime.get(i)]
    spos = np.array(diff, dtype=np.int64) if diff else np.zeros(0, dtype=np.int64)
    _fit, aux = kernels.eval_full(payload, x.words, s.uf)
    best_fit, best_cnt, _epoch = kernels.crossover_phase_kernel(
        rng, payload, x.words, aux, spos, np.int64(len(diff)), float(c),
        np.int64(lam), s.uf, s.mark_epoch, np.int64(0),
        s.idx, s.cpos, s.cbest)
    winner = x.copy()
    for t in range(int(best_cnt)):
        kernels.bit_flip(winner.words, int(s.cbest[t]))
    return winner, problem.raw_value(int(best_fit)), lam
