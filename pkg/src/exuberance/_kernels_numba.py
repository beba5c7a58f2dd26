"""Numba kernels for the recursive Dickey-Fuller sweeps.

Layout shared with ``_kernels_numpy``: for lag ``p`` the regression row of
observation ``t`` (``t >= p + 1``) is

    z_t = (1, x[t-1], dx[t-1], ..., dx[t-p], dx[t])

with the response ``dx[t]`` stored last.  Row ``r = t - p - 1``.  The prefix
table holds ``sum_{r' < r} z z'`` as an unevaluated double-double
``hi + lo``; the window ``[s, e]`` (inclusive series indices) owns rows
``s .. e - p - 1``, so its moments are ``P[e - p] - P[s]``.
"""
import math

import numpy as np
from numba import njit, prange

RCOND_MIN = 1e-12
RSS_ABS_MIN = 1e-300
RSS_REL_MIN = 1e-12

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_ZERO_RESIDUAL = 2


@njit(cache=True)
def prefix_moments(x, p):
    T = x.shape[0]
    m = p + 3
    nrows = T - p - 1
    hi = np.zeros((nrows + 1, m, m))
    lo = np.zeros((nrows + 1, m, m))
    z = np.empty(m)
    run_hi = np.zeros((m, m))
    run_lo = np.zeros((m, m))
    for r in range(nrows):
        t = r + p + 1
        z[0] = 1.0
        z[1] = x[t - 1]
        for i in range(1, p + 1):
            z[1 + i] = x[t - i] - x[t - i - 1]
        z[m - 1] = x[t] - x[t - 1]
        for a in range(m):
            for b in range(a, m):
                v = z[a] * z[b]
                # TwoSum: run_hi + v == s + err exactly
                s = run_hi[a, b] + v
                bv = s - run_hi[a, b]
                err = (run_hi[a, b] - (s - bv)) + (v - bv)
                run_hi[a, b] = s
                run_lo[a, b] += err
                hi[r + 1, a, b] = s
                hi[r + 1, b, a] = s
                lo[r + 1, a, b] = run_lo[a, b]
                lo[r + 1, b, a] = run_lo[a, b]
    return hi, lo


@njit(cache=True)
def _solve(hi, lo, p, s, e, M, L, Ainv, d, beta):
    """Fill ``beta`` and return (tstat, rss, var_rho, status) for window [s, e]."""
    k = p + 2
    m = k + 1
    r0 = s
    r1 = e - p
    n = r1 - r0
    for a in range(m):
        for b in range(m):
            M[a, b] = (hi[r1, a, b] - hi[r0, a, b]) + (lo[r1, a, b] - lo[r0, a, b])

    # Jacobi equilibration makes the condition test scale-free
    for i in range(k):
        if not M[i, i] > 0.0:
            return np.nan, np.nan, np.nan, STATUS_SINGULAR
        d[i] = math.sqrt(M[i, i])
    for i in range(k):
        for j in range(k):
            L[i, j] = 0.0
    for j in range(k):
        acc = M[j, j] / (d[j] * d[j])
        for q in range(j):
            acc -= L[j, q] * L[j, q]
        if not acc > 0.0:
            return np.nan, np.nan, np.nan, STATUS_SINGULAR
        L[j, j] = math.sqrt(acc)
        for i in range(j + 1, k):
            acc = M[i, j] / (d[i] * d[j])
            for q in range(j):
                acc -= L[i, q] * L[j, q]
            L[i, j] = acc / L[j, j]

    # inverse of the equilibrated matrix: forward-substitute columns of I,
    # then back-substitute against L'
    for c in range(k):
        for i in range(k):
            acc = 1.0 if i == c else 0.0
            for q in range(i):
                acc -= L[i, q] * Ainv[q, c]
            Ainv[i, c] = acc / L[i, i]
        for i in range(k - 1, -1, -1):
            acc = Ainv[i, c]
            for q in range(i + 1, k):
                acc -= L[q, i] * Ainv[q, c]
            Ainv[i, c] = acc / L[i, i]

    norm_a = 0.0
    norm_inv = 0.0
    for j in range(k):
        ca = 0.0
        ci = 0.0
        for i in range(k):
            ca += abs(M[i, j]) / (d[i] * d[j])
            ci += abs(Ainv[i, j])
        if ca > norm_a:
            norm_a = ca
        if ci > norm_inv:
            norm_inv = ci
    if not 1.0 / (norm_a * norm_inv) >= RCOND_MIN:
        return np.nan, np.nan, np.nan, STATUS_SINGULAR

    yy = M[k, k]
    fitted = 0.0
    for i in range(k):
        acc = 0.0
        for j in range(k):
            acc += Ainv[i, j] * (M[j, k] / d[j])
        beta[i] = acc / d[i]
        fitted += M[i, k] * beta[i]
    rss = yy - fitted
    if rss <= RSS_ABS_MIN or rss <= RSS_REL_MIN * yy:
        return np.nan, rss, np.nan, STATUS_ZERO_RESIDUAL
    s2 = rss / (n - k)
    var_rho = s2 * Ainv[1, 1] / (d[1] * d[1])
    return beta[1] / math.sqrt(var_rho), rss, var_rho, STATUS_OK


@njit(cache=True)
def window_fit(hi, lo, p, s, e):
    k = p + 2
    M = np.empty((k + 1, k + 1))
    L = np.empty((k, k))
    Ainv = np.empty((k, k))
    d = np.empty(k)
    beta = np.zeros(k)
    t, rss, var_rho, status = _solve(hi, lo, p, s, e, M, L, Ainv, d, beta)
    return t, rss, var_rho, status, beta


@njit(cache=True)
def _endpoint_sup(hi, lo, p, w0, e, M, L, Ainv, d, beta):
    best = -np.inf
    best_s = -1
    first = np.nan
    ndeg = 0
    for s in range(0, e - w0 + 2):
        t, _, _, status = _solve(hi, lo, p, s, e, M, L, Ainv, d, beta)
        if status != STATUS_OK:
            ndeg += 1
            continue
        if s == 0:
            first = t
        if t > best:
            best = t
            best_s = s
    return best, best_s, first, ndeg


@njit(parallel=True, cache=True)
def bsadf(hi, lo, p, w0):
    T = hi.shape[0] + p
    n_end = T - w0 + 1
    k = p + 2
    stats = np.full(n_end, np.nan)
    starts = np.full(n_end, -1, dtype=np.int64)
    forward = np.full(n_end, np.nan)
    ndeg = np.zeros(n_end, dtype=np.int64)
    for j in prange(n_end):
        M = np.empty((k + 1, k + 1))
        L = np.empty((k, k))
        Ainv = np.empty((k, k))
        d = np.empty(k)
        beta = np.empty(k)
        best, best_s, first, nd = _endpoint_sup(hi, lo, p, w0, w0 - 1 + j, M, L, Ainv, d, beta)
        if best_s >= 0:
            stats[j] = best
            starts[j] = best_s
        forward[j] = first
        ndeg[j] = nd
    return stats, starts, forward, ndeg


@njit(cache=True)
def forward_sweep(hi, lo, p, w0):
    T = hi.shape[0] + p
    n_end = T - w0 + 1
    k = p + 2
    M = np.empty((k + 1, k + 1))
    L = np.empty((k, k))
    Ainv = np.empty((k, k))
    d = np.empty(k)
    beta = np.empty(k)
    out = np.full(n_end, np.nan)
    for j in range(n_end):
        t, _, _, status = _solve(hi, lo, p, 0, w0 - 1 + j, M, L, Ainv, d, beta)
        if status == STATUS_OK:
            out[j] = t
    return out


@njit(parallel=True, cache=True)
def gsadf_batch(Y, p, w0):
    """Null-distribution sweep over the rows of ``Y``.

    Rows must already be centred.  Rows whose every window is degenerate
    come back with NaN ``gsadf``.
    """
    reps, T = Y.shape
    n_end = T - w0 + 1
    k = p + 2
    sadf = np.full(reps, np.nan)
    gsadf = np.full(reps, np.nan)
    bs = np.full((reps, n_end), np.nan)
    ndeg = np.zeros(reps, dtype=np.int64)
    for i in prange(reps):
        hi, lo = prefix_moments(Y[i], p)
        M = np.empty((k + 1, k + 1))
        L = np.empty((k, k))
        Ainv = np.empty((k, k))
        d = np.empty(k)
        beta = np.empty(k)
        g = -np.inf
        f = -np.inf
        nd = 0
        for j in range(n_end):
            best, best_s, first, c = _endpoint_sup(hi, lo, p, w0, w0 - 1 + j, M, L, Ainv, d, beta)
            nd += c
            if best_s >= 0:
                bs[i, j] = best
                if best > g:
                    g = best
            if first > f:
                f = first
        ndeg[i] = nd
        if g > -np.inf:
            gsadf[i] = g
        if f > -np.inf:
            sadf[i] = f
    return sadf, gsadf, bs, ndeg
