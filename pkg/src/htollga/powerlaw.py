"""Exact discrete power-law distributions.

``pow(beta, u)`` puts mass ``C * i**-beta`` on the integers ``1..u`` where
``C = 1 / sum(j**-beta, j=1..u)``.  The bounding ``u`` may be ``INFINITE``
(then ``beta > 1`` is required for the normalizing sum to converge).

Sampling is exact: inversion over a precomputed CDF table for bounded
supports, rejection from a continuous Pareto envelope for unbounded or
astronomically bounded ones.  Infinite-support constants are computed by
direct summation plus an Euler-Maclaurin tail, accurate to far better than
the documented 1e-12 relative error.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

INFINITE = math.inf

# Largest bounding for which the CDF table is used when beta > 1; above it
# the Pareto-envelope rejection sampler takes over.
TABLE_MAX = 2**20
# Largest bounding allowed at all when beta <= 1 (no rejection envelope
# exists there, and a bigger table would be infeasible).
FLAT_MAX = 2**24

# Cutoffs for the normalizing / moment sums: direct summation below,
# Euler-Maclaurin above (or for infinite tails).
_DIRECT_MAX = 2**20
_EM_BASE = 4096


@dataclass(frozen=True)
class PowerLawParams:
    """Exponent ``beta`` and bounding ``upper`` of a discrete power law.

    ``upper`` is a positive integer or ``INFINITE``. Immutable and hashable;
    the sampling table is cached per distinct parameterization.
    """

    beta: float
    upper: object  # int or INFINITE

    def __post_init__(self):
        beta = float(self.beta)
        if not math.isfinite(beta) or beta < 0.0:
            raise ValueError(f"power-law exponent must be a real >= 0, got {self.beta!r}")
        object.__setattr__(self, "beta", beta)
        u = self.upper
        if u == INFINITE:
            if beta <= 1.0:
                raise ValueError(
                    f"unbounded power law needs beta > 1 (the normalizing sum "
                    f"diverges for beta={beta})")
            object.__setattr__(self, "upper", INFINITE)
            return
        if isinstance(u, float):
            if not u.is_integer():
                raise ValueError(f"bounding must be a positive integer or INFINITE, got {u!r}")
            u = int(u)
        if not isinstance(u, int) or u < 1:
            raise ValueError(f"bounding must be a positive integer or INFINITE, got {self.upper!r}")
        if beta <= 1.0 and u > FLAT_MAX:
            raise ValueError(
                f"pathological configuration: beta={beta} <= 1 with bounding "
                f"{u} > 2**24 admits no exact sampler")
        object.__setattr__(self, "upper", u)

    @property
    def is_infinite(self):
        return self.upper == INFINITE

    @property
    def uses_table(self):
        return not self.is_infinite and (self.upper <= TABLE_MAX or self.beta <= 1.0)


def _em_segment(s, a, b):
    """sum(j**-s for j in a..b) by Euler-Maclaurin; b may be inf (s > 1)."""
    fa = a ** -s
    dfa = -s * a ** (-s - 1.0)
    d3fa = -s * (s + 1.0) * (s + 2.0) * a ** (-s - 3.0)
    if b == INFINITE:
        integral = a ** (1.0 - s) / (s - 1.0)
        fb = dfb = d3fb = 0.0
    else:
        if s == 1.0:
            integral = math.log(b / a)
        else:
            integral = (a ** (1.0 - s) - b ** (1.0 - s)) / (s - 1.0)
        fb = b ** -s
        dfb = -s * b ** (-s - 1.0)
        d3fb = -s * (s + 1.0) * (s + 2.0) * b ** (-s - 3.0)
    return (integral + (fa + fb) / 2.0
            + (dfb - dfa) / 12.0
            - (d3fb - d3fa) / 720.0)


@lru_cache(maxsize=4096)
def power_sum(s, u):
    """sum(j**-s for j in 1..u) for real s; u a positive integer or INFINITE.

    Divergent cases (u infinite with s <= 1) raise.
    """
    if u == INFINITE and s <= 1.0:
        raise ValueError(f"sum of j**-{s} diverges")
    if u != INFINITE and u <= _DIRECT_MAX:
        j = np.arange(1, int(u) + 1, dtype=np.float64)
        return float(np.sum(j ** -s))
    j = np.arange(1, _EM_BASE, dtype=np.float64)
    head = float(np.sum(j ** -s))
    return head + _em_segment(s, float(_EM_BASE), u)


def zeta(beta):
    """Riemann zeta for beta > 1, relative error far below 1e-12."""
    return power_sum(beta, INFINITE)


def normalization(params):
    """The normalization coefficient: 1 / sum(j**-beta, j=1..u)."""
    return 1.0 / power_sum(params.beta, params.upper)


def pmf(params, i):
    """P[X = i]; zero outside [1..u]."""
    if i < 1:
        raise ValueError(f"power-law support starts at 1, got i={i}")
    if not params.is_infinite and i > params.upper:
        return 0.0
    return normalization(params) * float(i) ** -params.beta


def cdf(params, i):
    """P[X <= i] = C * sum(j**-beta, j=1..min(i, u))."""
    if i < 1:
        raise ValueError(f"power-law support starts at 1, got i={i}")
    top = i if params.is_infinite else min(i, params.upper)
    return min(1.0, normalization(params) * power_sum(params.beta, top))


def expectation(params):
    """E[X]; INFINITE for an unbounded law with beta <= 2."""
    if params.is_infinite:
        if params.beta <= 2.0:
            return INFINITE
        return zeta(params.beta - 1.0) / zeta(params.beta)
    return power_sum(params.beta - 1.0, params.upper) * normalization(params)


def second_moment(params):
    """E[X**2]; INFINITE for an unbounded law with beta <= 3."""
    if params.is_infinite:
        if params.beta <= 3.0:
            return INFINITE
        return zeta(params.beta - 2.0) / zeta(params.beta)
    return power_sum(params.beta - 2.0, params.upper) * normalization(params)


@lru_cache(maxsize=64)
def _cdf_table_cached(beta, upper):
    j = np.arange(1, upper + 1, dtype=np.float64)
    w = j ** -beta
    table = np.cumsum(w)
    table /= table[-1]
    table[-1] = 1.0
    return table


def cdf_table(params):
    """The inversion-sampling CDF table (bounded supports only)."""
    if not params.uses_table:
        raise ValueError(f"no CDF table for {params}: rejection-sampled")
    return _cdf_table_cached(params.beta, params.upper)


def rejection_upper(params):
    """The envelope cutoff handed to the rejection sampler.

    Boundings above 2**62 behave as unbounded: the sampler caps returned
    values at 2**62 anyway and the probability mass beyond is far below
    float resolution.
    """
    if params.is_infinite or params.upper > 2**62:
        return np.inf
    return float(params.upper)


def sample(params, rng):
    """One exact draw from pow(beta, u) using the stream ``rng``."""
    if params.uses_table:
        return int(kernels.powerlaw_from_cdf(rng, cdf_table(params)))
    return int(kernels.zeta_draw(rng, params.beta, rejection_upper(params)))


def sample_many(params, rng, size):
    """``size`` exact draws as an int64 array (bulk path for the test and
    verification suites)."""
    out = np.empty(size, dtype=np.int64)
    if params.uses_table:
        kernels.draw_powerlaw_table_many(rng, cdf_table(params), out)
    else:
        kernels.draw_zeta_many(rng, params.beta, rejection_upper(params), out)
    return out
