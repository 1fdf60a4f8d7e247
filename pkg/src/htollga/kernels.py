"""Hot numeric kernels: packed bit strings, exact samplers, fitness
evaluation and the full run loops of all three algorithms.

Conventions
-----------
* Bit strings are packed into ``uint64`` words, bit ``i`` lives at word
  ``i >> 6``, position ``i & 63``; padding bits above ``nbits`` are always
  zero.
* Fitness is always maximized internally.  Minimization problems (MST,
  partition) are negated here and un-negated at the reporting boundary.
* A problem is passed around as the tuple
  ``(kind, nbits, k, pw, wtotal, eu, ev, ew, n_v, wmax)`` built by
  :func:`htollga.problems.kernel_payload`; unused slots hold zeros / empty
  arrays so every problem kind shares one compiled specialization.
* All randomness comes from a ``numpy.random.Generator`` argument.  Only
  ``rng.random()`` and ``rng.binomial()`` are consumed (numba implements both
  bit-compatibly with numpy), so the compiled and the interpreted path see
  identical streams.
* Scalar transcendentals use :mod:`math` so that both paths call the same
  libm symbols.
"""

import math

import numpy as np

from .accel import jitted

ONEMAX = 0
LEADINGONES = 1
JUMP = 2
MST = 3
PARTITION = 4

I64_MIN = np.int64(-(2**63))
# int64-safe cap applied to rejection-sampled population sizes; unreachable
# for any feasible evaluation budget
LAMBDA_CAP_F = 4.611686018427387e18

_U1 = np.uint64(1)
_U4 = np.uint64(4)
_U8 = np.uint64(8)
_U16 = np.uint64(16)
_U32 = np.uint64(32)
_UMASK6 = np.uint64(63)
_ALL1 = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_S1 = np.uint64(1)
_S2 = np.uint64(2)

_TWO32 = np.int64(4294967296)
_TWO53F = 9007199254740992.0  # 2**53


@jitted
def bit_get(words, i):
    return np.int64((words[i >> 6] >> (np.uint64(i) & _UMASK6)) & _U1)


@jitted
def bit_flip(words, i):
    words[i >> 6] ^= _U1 << (np.uint64(i) & _UMASK6)


@jitted
def bit_set(words, i, value):
    m = _U1 << (np.uint64(i) & _UMASK6)
    if value:
        words[i >> 6] |= m
    else:
        words[i >> 6] &= ~m


@jitted
def popcount64(w):
    w = w - ((w >> _S1) & _M1)
    w = (w & _M2) + ((w >> _S2) & _M2)
    w = (w + (w >> _U4)) & _M4
    w = w + (w >> _U32)
    w = w + (w >> _U16)
    w = w + (w >> _U8)
    return np.int64(w & np.uint64(127))


@jitted
def popcount_words(words):
    total = np.int64(0)
    for wi in range(words.shape[0]):
        total += popcount64(words[wi])
    return total


@jitted
def hamming_words(a, b):
    total = np.int64(0)
    for wi in range(a.shape[0]):
        total += popcount64(a[wi] ^ b[wi])
    return total


@jitted
def leading_ones_words(words, nbits):
    total = np.int64(0)
    for wi in range(words.shape[0]):
        w = words[wi]
        if w == _ALL1:
            total += 64
            continue
        # trailing ones of w: lowest zero bit; w != all-ones so w+1 is safe
        low = (~w) & (w + _U1)
        total += popcount64(low - _U1)
        break
    if total > nbits:
        total = nbits
    return total


@jitted
def randint_below(rng, m):
    """Exact uniform draw from [0, m) for 1 <= m < 2**31.

    Lemire multiply-shift rejection on the top 32 bits of one 53-bit
    uniform.  The rejection threshold (an integer division) is only
    computed when the fractional part falls below m, i.e. with
    probability m / 2**32.
    """
    k = np.int64(rng.random() * _TWO53F) >> 21
    prod = k * m
    low = prod & (_TWO32 - 1)
    if low < m:
        threshold = _TWO32 % m
        while low < threshold:
            k = np.int64(rng.random() * _TWO53F) >> 21
            prod = k * m
            low = prod & (_TWO32 - 1)
    return prod >> 32


@jitted
def floyd_sample(rng, n, cnt, out, mark_epoch, epoch):
    """Uniform sample of ``cnt`` distinct values from [0, n) into
    ``out[:cnt]`` (set semantics; the order is not uniform).

    Floyd's subset-sampling algorithm: exactly ``cnt`` bounded draws, every
    cnt-subset equally likely.  Membership marks are epoch stamps in
    ``mark_epoch``; the caller bumps ``epoch`` before each sample, so no
    reset pass is needed.
    """
    j0 = n - cnt
    for j in range(j0, n):
        t = randint_below(rng, j + 1)
        if mark_epoch[t] == epoch:
            mark_epoch[j] = epoch
            out[j - j0] = j
        else:
            mark_epoch[t] = epoch
            out[j - j0] = t


@jitted
def powerlaw_from_cdf(rng, cdf):
    """Inversion sampling from a precomputed power-law CDF table.

    ``cdf[i]`` is P[X <= i+1]; the last entry is exactly 1.0.
    """
    u = rng.random()
    lo = 0
    hi = cdf.shape[0] - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return np.int64(lo + 1)


@jitted
def zeta_draw(rng, beta, upper):
    """Exact sampler for the power law with exponent beta > 1 on [1..upper].

    Rejection from the continuous Pareto envelope: propose
    X = floor(U**(-1/(beta-1))) and accept with the exact ratio of the target
    mass i**-beta to the proposal mass; proposals above ``upper`` (a float,
    possibly inf) are rejected, which restricts the law to [1..upper].
    Results are capped at 2**62 for int64 safety; the cap is unreachable for
    any feasible evaluation budget.
    """
    am1 = beta - 1.0
    b = math.pow(2.0, am1)
    while True:
        u = rng.random()
        v = rng.random()
        x = math.floor(math.pow(u, -1.0 / am1))
        if x > upper:
            continue
        t = math.pow(1.0 + 1.0 / x, am1)
        if v * x * (t - 1.0) / (b - 1.0) <= t / b:
            if x > LAMBDA_CAP_F:
                x = LAMBDA_CAP_F
            return np.int64(x)


@jitted
def jump_value(om, nbits, k):
    if om <= nbits - k or om == nbits:
        return om + k
    return nbits - om


@jitted
def _mst_raw(words, eu, ev, ew, n_v, wmax, uf):
    """Neumann-Wegener fitness of the selected edge subset (minimized)."""
    for v in range(n_v):
        uf[v] = v
    ne = np.int64(0)
    wsum = np.int64(0)
    for e in range(eu.shape[0]):
        if bit_get(words, e):
            ne += 1
            wsum += ew[e]
            a = eu[e]
            while uf[a] != a:
                uf[a] = uf[uf[a]]
                a = uf[a]
            bb = ev[e]
            while uf[bb] != bb:
                uf[bb] = uf[uf[bb]]
                bb = uf[bb]
            if a != bb:
                uf[a] = bb
    cc = np.int64(0)
    for v in range(n_v):
        a = v
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        if a == v:
            cc += 1
    wp1 = wmax + 1
    return wp1 * wp1 * cc + wp1 * ne + wsum


@jitted
def eval_full(prob, words, uf):
    """Evaluate the current bit string from scratch.

    Returns ``(fitness, aux)`` where ``fitness`` is the maximized internal
    value and ``aux`` is the incremental-evaluation state: the OneMax value
    for unitation problems, the LeadingOnes value, or the bin-1 weight for
    partition (0 for MST).
    """
    kind, nbits, k, pw, wtotal, eu, ev, ew, n_v, wmax = prob
    if kind == ONEMAX:
        om = popcount_words(words)
        return om, om
    elif kind == LEADINGONES:
        lo = leading_ones_words(words, nbits)
        return lo, lo
    elif kind == JUMP:
        om = popcount_words(words)
        return jump_value(om, nbits, k), om
    elif kind == MST:
        return -_mst_raw(words, eu, ev, ew, n_v, wmax, uf), np.int64(0)
    else:
        s = np.int64(0)
        for i in range(nbits):
            if bit_get(words, i):
                s += pw[i]
        heavier = s if s > wtotal - s else wtotal - s
        return -heavier, s


@jitted
def eval_flip(prob, words, pos, cnt, aux, uf, mark_epoch, epoch):
    """Fitness of the offspring obtained by flipping ``pos[:cnt]`` in
    ``words`` (positions are distinct).  ``words`` is left unchanged."""
    kind, nbits, k, pw, wtotal, eu, ev, ew, n_v, wmax = prob
    if kind == ONEMAX or kind == JUMP:
        om = aux
        for t in range(cnt):
            om += 1 - 2 * bit_get(words, pos[t])
        if kind == ONEMAX:
            return om
        return jump_value(om, nbits, k)
    elif kind == PARTITION:
        s = aux
        for t in range(cnt):
            p = pos[t]
            if bit_get(words, p):
                s -= pw[p]
            else:
                s += pw[p]
        heavier = s if s > wtotal - s else wtotal - s
        return -heavier
    elif kind == LEADINGONES:
        lo = aux
        mn = nbits
        for t in range(cnt):
            p = pos[t]
            mark_epoch[p] = epoch
            if p < mn:
                mn = p
        if mn < lo:
            return mn
        if lo >= nbits:
            return lo
        if mark_epoch[lo] != epoch:
            return lo
        i = lo + 1
        while i < nbits:
            b = bit_get(words, i)
            if mark_epoch[i] == epoch:
                b = 1 - b
            if b == 0:
                break
            i += 1
        return i
    else:
        for t in range(cnt):
            bit_flip(words, pos[t])
        raw = _mst_raw(words, eu, ev, ew, n_v, wmax, uf)
        for t in range(cnt):
            bit_flip(words, pos[t])
        return -raw


@jitted
def mutation_phase_kernel(rng, prob, words, aux, ell, count, uf,
                          mark_epoch, epoch, cur_pos, best_pos):
    """Generate ``count`` mutants, each flipping the same ``ell`` uniformly
    chosen distinct positions, and keep the first fitness-maximal one.

    The winner's flip set is left in ``best_pos[:ell]``.  Returns
    ``(best_fitness, epoch)``.
    """
    nbits = prob[1]
    best_fit = I64_MIN
    for i in range(count):
        epoch += 1
        floyd_sample(rng, nbits, ell, cur_pos, mark_epoch, epoch)
        epoch += 1
        f = eval_flip(prob, words, cur_pos, ell, aux, uf, mark_epoch, epoch)
        if f > best_fit:
            best_fit = f
            for t in range(ell):
                best_pos[t] = cur_pos[t]
    return best_fit, epoch


@jitted
def crossover_phase_kernel(rng, prob, words, aux, spos, ell, c, count, uf,
                           mark_epoch, epoch, idx_buf, cur_pos, best_pos):
    """Generate ``count`` crossover offspring and keep the first
    fitness-maximal one.

    Each offspring takes every bit from the mutation winner with probability
    ``c`` (else from the parent); since the two differ exactly on
    ``spos[:ell]``, the offspring equals the parent with an independent
    Bernoulli(c) subset of those positions flipped, sampled here as a
    Binomial(ell, c) count plus a uniform subset of that size.  The winner's
    flip set is left in ``best_pos[:best_cnt]``.  Returns
    ``(best_fitness, best_cnt, epoch)``.
    """
    best_fit = I64_MIN
    best_cnt = np.int64(0)
    for i in range(count):
        b = np.int64(rng.binomial(ell, c))
        epoch += 1
        floyd_sample(rng, ell, b, idx_buf, mark_epoch, epoch)
        for t in range(b):
            cur_pos[t] = spos[idx_buf[t]]
        epoch += 1
        f = eval_flip(prob, words, cur_pos, b, aux, uf, mark_epoch, epoch)
        if f > best_fit:
            best_fit = f
            best_cnt = b
            for t in range(b):
                best_pos[t] = cur_pos[t]
    return best_fit, best_cnt, epoch


@jitted
def ga_run_kernel(rng, prob, words, opt_known, opt_fit, budget,
                  static_mode, lam0, p0, c0,
                  p_cdf, c_cdf, lam_by_table, lam_cdf, lam_beta, lam_upper,
                  sqrt_n, uf, mark_epoch,
                  mpos, mbest, cpos, cbest, idx_buf,
                  trace_lam, trace_fit):
    """Full (1+(lambda,lambda)) GA run, heavy-tailed or static parameters.

    Every generated offspring costs one evaluation (2*lambda per complete
    iteration).  An iteration that would overshoot ``budget`` is truncated
    mid-phase, its generated offspring are still charged, and the run stops
    as failed; truncated iterations do not count towards ``iterations``.

    Returns ``(iterations, evaluations, success, fitness)``.
    """
    nbits = prob[1]
    fit, aux = eval_full(prob, words, uf)
    iterations = np.int64(0)
    evals = np.int64(0)
    epoch = np.int64(0)
    trace_cap = trace_lam.shape[0]
    while True:
        if opt_known and fit >= opt_fit:
            return iterations, evals, True, fit
        if evals >= budget:
            return iterations, evals, False, fit
        if static_mode:
            lam = lam0
            p = p0
            c = c0
        else:
            xp = powerlaw_from_cdf(rng, p_cdf)
            xc = powerlaw_from_cdf(rng, c_cdf)
            if lam_by_table:
                lam = powerlaw_from_cdf(rng, lam_cdf)
            else:
                lam = zeta_draw(rng, lam_beta, lam_upper)
            p = xp / sqrt_n
            c = xc / sqrt_n
        ell = np.int64(rng.binomial(nbits, p))

        allowed = budget - evals
        m_count = lam if lam < allowed else allowed
        best_mfit, epoch = mutation_phase_kernel(
            rng, prob, words, aux, ell, m_count, uf,
            mark_epoch, epoch, mpos, mbest)
        evals += m_count
        if m_count < lam:
            return iterations, evals, False, fit

        allowed = budget - evals
        c_count = lam if lam < allowed else allowed
        best_cfit, best_ccnt, epoch = crossover_phase_kernel(
            rng, prob, words, aux, mbest, ell, c, c_count, uf,
            mark_epoch, epoch, idx_buf, cpos, cbest)
        evals += c_count
        if c_count < lam:
            return iterations, evals, False, fit

        if best_cfit >= fit:
            if best_ccnt > 0:
                for t in range(best_ccnt):
                    bit_flip(words, cbest[t])
                fit, aux = eval_full(prob, words, uf)
        if iterations < trace_cap:
            trace_lam[iterations] = lam
            trace_fit[iterations] = fit
        iterations += 1


@jitted
def ea_run_kernel(rng, prob, words, opt_known, opt_fit, budget, rate, uf,
                  mark_epoch, pos, trace_lam, trace_fit):
    """(1+1) EA with standard bit mutation at the given rate.

    One evaluation per iteration; the offspring replaces the parent iff its
    fitness is not worse.  Returns ``(iterations, evaluations, success,
    fitness)``.
    """
    nbits = prob[1]
    fit, aux = eval_full(prob, words, uf)
    iterations = np.int64(0)
    evals = np.int64(0)
    epoch = np.int64(0)
    trace_cap = trace_lam.shape[0]
    while True:
        if opt_known and fit >= opt_fit:
            return iterations, evals, True, fit
        if evals >= budget:
            return iterations, evals, False, fit
        m = np.int64(rng.binomial(nbits, rate))
        epoch += 1
        floyd_sample(rng, nbits, m, pos, mark_epoch, epoch)
        epoch += 1
        f = eval_flip(prob, words, pos, m, aux, uf, mark_epoch, epoch)
        evals += 1
        if f >= fit:
            if m > 0:
                for t in range(m):
                    bit_flip(words, pos[t])
                fit, aux = eval_full(prob, words, uf)
        if iterations < trace_cap:
            trace_lam[iterations] = 1
            trace_fit[iterations] = fit
        iterations += 1


@jitted
def composite_hamming_counts(rng, nbits, p, c, iters, hist, flip_counts):
    """Histogram of Hamming distances H(x, y) over ``iters`` composite
    lambda=1 iterations (mutation winner + biased crossover) from the fixed
    all-zero parent, plus per-position flip counts of y."""
    words = np.zeros((nbits + 63) >> 6, dtype=np.uint64)
    uf = np.zeros(0, dtype=np.int64)
    pw = np.zeros(0, dtype=np.int64)
    eua = np.zeros(0, dtype=np.int64)
    prob = (ONEMAX, nbits, np.int64(0), pw, np.int64(0), eua, eua, eua,
            np.int64(0), np.int64(0))
    mark_epoch = np.zeros(nbits, dtype=np.int64)
    mpos = np.zeros(nbits, dtype=np.int64)
    mbest = np.zeros(nbits, dtype=np.int64)
    cpos = np.zeros(nbits, dtype=np.int64)
    cbest = np.zeros(nbits, dtype=np.int64)
    idx_buf = np.zeros(nbits, dtype=np.int64)
    epoch = np.int64(0)
    aux = np.int64(0)
    for it in range(iters):
        ell = np.int64(rng.binomial(nbits, p))
        _mf, epoch = mutation_phase_kernel(
            rng, prob, words, aux, ell, np.int64(1), uf,
            mark_epoch, epoch, mpos, mbest)
        _cf, bcnt, epoch = crossover_phase_kernel(
            rng, prob, words, aux, mbest, ell, c, np.int64(1), uf,
            mark_epoch, epoch, idx_buf, cpos, cbest)
        hist[bcnt] += 1
        for t in range(bcnt):
            flip_counts[cbest[t]] += 1


@jitted
def draw_powerlaw_table_many(rng, cdf, out):
    for i in range(out.shape[0]):
        out[i] = powerlaw_from_cdf(rng, cdf)


@jitted
def draw_zeta_many(rng, beta, upper, out):
    for i in range(out.shape[0]):
        out[i] = zeta_draw(rng, beta, upper)


@jitted
def draw_binomial_many(rng, n, p, out):
    for i in range(out.shape[0]):
        out[i] = rng.binomial(n, p)


@jitted
def draw_randint_many(rng, m, out):
    for i in range(out.shape[0]):
        out[i] = randint_below(rng, m)


@jitted
def fill_random_words(rng, words, nbits):
    """Independent fair-coin bits: one uniform per bit, padding left zero."""
    for i in range(nbits):
        if rng.random() < 0.5:
            words[i >> 6] |= _U1 << (np.uint64(i) & _UMASK6)
