"""Pure-numpy kernels, vectorised over windows.

Same functions, layout and arithmetic order as ``_kernels_numba``; the
per-window solve runs on stacks of windows instead of scalars.
"""
import numpy as np

RCOND_MIN = 1e-12
RSS_ABS_MIN = 1e-300
RSS_REL_MIN = 1e-12

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_ZERO_RESIDUAL = 2

# windows solved per vectorised batch; bounds temporaries to a few MB
_CHUNK = 1 << 16


def prefix_moments(x, p):
    x = np.asarray(x, dtype=np.float64)
    T = x.shape[0]
    m = p + 3
    nrows = T - p - 1
    Z = np.empty((nrows, m))
    t = np.arange(p + 1, T)
    Z[:, 0] = 1.0
    Z[:, 1] = x[t - 1]
    for i in range(1, p + 1):
        Z[:, 1 + i] = x[t - i] - x[t - i - 1]
    Z[:, m - 1] = x[t] - x[t - 1]
    outer = Z[:, :, None] * Z[:, None, :]

    hi = np.zeros((nrows + 1, m, m))
    lo = np.zeros((nrows + 1, m, m))
    run_hi = np.zeros((m, m))
    run_lo = np.zeros((m, m))
    for r in range(nrows):
        v = outer[r]
        s = run_hi + v
        bv = s - run_hi
        run_lo = run_lo + ((run_hi - (s - bv)) + (v - bv))
        run_hi = s
        hi[r + 1] = run_hi
        lo[r + 1] = run_lo
    return hi, lo


def solve_windows(hi, lo, p, starts, ends):
    """Vectorised solve for windows ``[starts[i], ends[i]]``.

    Returns ``(tstat, rss, var_rho, status, beta)`` with one entry per window.
    """
    starts = np.asarray(starts, dtype=np.int64)
    ends = np.asarray(ends, dtype=np.int64)
    k = p + 2
    r0 = starts
    r1 = ends - p
    n = (r1 - r0).astype(np.float64)
    M = (hi[r1] - hi[r0]) + (lo[r1] - lo[r0])
    W = M.shape[0]

    status = np.zeros(W, dtype=np.int64)
    with np.errstate(all="ignore"):
        diag = np.stack([M[:, i, i] for i in range(k)], axis=1)
        bad = ~np.all(diag > 0.0, axis=1)
        d = np.sqrt(np.where(bad[:, None], 1.0, diag))

        L = np.zeros((W, k, k))
        for j in range(k):
            acc = M[:, j, j] / (d[:, j] * d[:, j])
            for q in range(j):
                acc = acc - L[:, j, q] * L[:, j, q]
            bad |= ~(acc > 0.0)
            L[:, j, j] = np.sqrt(np.where(acc > 0.0, acc, 1.0))
            for i in range(j + 1, k):
                acc = M[:, i, j] / (d[:, i] * d[:, j])
                for q in range(j):
                    acc = acc - L[:, i, q] * L[:, j, q]
                L[:, i, j] = acc / L[:, j, j]

        Ainv = np.empty((W, k, k))
        for c in range(k):
            for i in range(k):
                acc = np.full(W, 1.0 if i == c else 0.0)
                for q in range(i):
                    acc = acc - L[:, i, q] * Ainv[:, q, c]
                Ainv[:, i, c] = acc / L[:, i, i]
            for i in range(k - 1, -1, -1):
                acc = Ainv[:, i, c]
                for q in range(i + 1, k):
                    acc = acc - L[:, q, i] * Ainv[:, q, c]
                Ainv[:, i, c] = acc / L[:, i, i]

        norm_a = np.zeros(W)
        norm_inv = np.zeros(W)
        for j in range(k):
            ca = np.zeros(W)
            ci = np.zeros(W)
            for i in range(k):
                ca = ca + np.abs(M[:, i, j]) / (d[:, i] * d[:, j])
                ci = ci + np.abs(Ainv[:, i, j])
            norm_a = np.maximum(norm_a, ca)
            norm_inv = np.maximum(norm_inv, ci)
        bad |= ~(1.0 / (norm_a * norm_inv) >= RCOND_MIN)
        status[bad] = STATUS_SINGULAR

        yy = M[:, k, k]
        beta = np.empty((W, k))
        fitted = np.zeros(W)
        for i in range(k):
            acc = np.zeros(W)
            for j in range(k):
                acc = acc + Ainv[:, i, j] * (M[:, j, k] / d[:, j])
            beta[:, i] = acc / d[:, i]
            fitted = fitted + M[:, i, k] * beta[:, i]
        rss = yy - fitted
        zero = ~bad & ((rss <= RSS_ABS_MIN) | (rss <= RSS_REL_MIN * yy))
        status[zero] = STATUS_ZERO_RESIDUAL

        var_rho = (rss / (n - k)) * Ainv[:, 1, 1] / (d[:, 1] * d[:, 1])
        tstat = beta[:, 1] / np.sqrt(var_rho)

    ok = status == STATUS_OK
    tstat = np.where(ok, tstat, np.nan)
    var_rho = np.where(ok, var_rho, np.nan)
    rss = np.where(status == STATUS_SINGULAR, np.nan, rss)
    beta[~ok & (status == STATUS_SINGULAR)] = 0.0
    return tstat, rss, var_rho, status, beta


def window_fit(hi, lo, p, s, e):
    t, rss, var_rho, status, beta = solve_windows(hi, lo, p, [s], [e])
    return float(t[0]), float(rss[0]), float(var_rho[0]), int(status[0]), beta[0]


def _window_grid(T, w0, first_end, last_end):
    """All (start, end) pairs for endpoints first_end..last_end, end-major."""
    ends_idx = np.arange(first_end, last_end + 1)
    counts = ends_idx - w0 + 2
    ends = np.repeat(ends_idx, counts)
    offsets = np.cumsum(counts) - counts
    starts = np.arange(ends.size) - np.repeat(offsets, counts)
    return starts, ends, counts


def bsadf(hi, lo, p, w0):
    T = hi.shape[0] + p
    n_end = T - w0 + 1
    stats = np.full(n_end, np.nan)
    best_starts = np.full(n_end, -1, dtype=np.int64)
    forward = np.full(n_end, np.nan)
    ndeg = np.zeros(n_end, dtype=np.int64)

    j = 0
    while j < n_end:
        # endpoint j owns j + 1 windows; take endpoints until ~_CHUNK windows
        j_hi = j + 1
        total = j + 1
        while j_hi < n_end and total + j_hi + 1 <= _CHUNK:
            total += j_hi + 1
            j_hi += 1
        first_end = w0 - 1 + j
        last_end = w0 - 1 + j_hi - 1
        starts, ends, counts = _window_grid(T, w0, first_end, last_end)
        t, _, _, status, _ = solve_windows(hi, lo, p, starts, ends)

        offsets = np.cumsum(counts) - counts
        valid = status == STATUS_OK
        masked = np.where(valid, t, -np.inf)
        seg_max = np.maximum.reduceat(masked, offsets)
        hit = valid & (masked == np.repeat(seg_max, counts))
        big = np.iinfo(np.int64).max
        seg_arg = np.minimum.reduceat(np.where(hit, starts, big), offsets)
        has = seg_arg != big

        sl = slice(j, j_hi)
        stats[sl] = np.where(has, seg_max, np.nan)
        best_starts[sl] = np.where(has, seg_arg, -1)
        forward[sl] = t[offsets]
        ndeg[sl] = np.add.reduceat((~valid).astype(np.int64), offsets)
        j = j_hi
    return stats, best_starts, forward, ndeg


def forward_sweep(hi, lo, p, w0):
    T = hi.shape[0] + p
    ends = np.arange(w0 - 1, T)
    t, _, _, _, _ = solve_windows(hi, lo, p, np.zeros_like(ends), ends)
    return t


def gsadf_batch(Y, p, w0):
    """Null-distribution sweep over the (pre-centred) rows of ``Y``."""
    reps, T = Y.shape
    n_end = T - w0 + 1
    sadf = np.full(reps, np.nan)
    gsadf = np.full(reps, np.nan)
    bs = np.full((reps, n_end), np.nan)
    ndeg = np.zeros(reps, dtype=np.int64)
    for i in range(reps):
        hi, lo = prefix_moments(Y[i], p)
        stats, _, forward, nd = bsadf(hi, lo, p, w0)
        bs[i] = stats
        ndeg[i] = nd.sum()
        if not np.all(np.isnan(stats)):
            gsadf[i] = np.nanmax(stats)
        if not np.all(np.isnan(forward)):
            sadf[i] = np.nanmax(forward)
    return sadf, gsadf, bs, ndeg
