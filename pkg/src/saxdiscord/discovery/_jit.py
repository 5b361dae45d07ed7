"""Numba kernels for the discovery engines.

All kernels are ``nogil`` so the engines can drive them from plain Python
threads. Work is handed out by atomic fetch-add on a shared counter (dynamic
scheduling); the best-so-far pair is guarded by a CAS spin lock and read
with acquire loads. Distances are squared throughout and every pair goes
through ``sqdist_rows``, so a given pair yields bit-identical values in every
engine and under every thread count.

Neighbour scan return convention: ``-1.0`` means the candidate was pruned
(a neighbour closer than the best-so-far exists), ``inf`` means it has no
non-self match at all, anything else is its exact nearest-neighbour
distance squared.
"""
import numpy as np
from numba import njit

from ..series import sqdist_rows
from ._atomics import atomic_add, atomic_cas, atomic_cas_f64, atomic_load, atomic_store

_INF = np.inf


@njit(nogil=True, cache=True)
def offer(best_sq, best_pos, spin, hist_sq, hist_pos, hist_len, i, nn):
    if nn < atomic_load(best_sq, 0):
        return False
    while atomic_cas(spin, 0, 0, 1) != 0:
        pass
    cur = best_sq[0]
    cur_pos = best_pos[0]
    ok = cur_pos < 0 or nn > cur or (nn == cur and i < cur_pos)
    if ok:
        best_pos[0] = i
        atomic_store(best_sq, 0, nn)
        k = hist_len[0]
        if k < hist_sq.shape[0]:
            hist_sq[k] = nn
            hist_pos[k] = i
            hist_len[0] = k + 1
    atomic_store(spin, 0, 0)
    return ok


@njit(nogil=True, cache=True)
def atomic_min_f64(cell, value):
    cur = atomic_load(cell, 0)
    while value < cur:
        seen = atomic_cas_f64(cell, 0, cur, value)
        if seen == cur:
            return
        cur = seen


@njit(nogil=True, cache=True)
def _visit(M, i, j, vw, nn, best_sq, prune, stats):
    """Evaluate one neighbour; returns the updated nn or -1.0 when pruned."""
    d = sqdist_rows(M[i], M[j], vw, nn if prune else _INF)
    stats[0] += 1
    if d < 0.0:
        stats[1] += 1
        return nn
    if prune and d < atomic_load(best_sq, 0):
        return -1.0
    return d if d < nn else nn


@njit(nogil=True, cache=True)
def bucket_scan(M, i, n, vw, codes, order, offsets, nn, best_sq, prune, stats):
    h = codes[i]
    for p in range(offsets[h], offsets[h + 1]):
        j = order[p]
        if j > i - n and j < i + n:
            continue
        nn = _visit(M, i, j, vw, nn, best_sq, prune, stats)
        if nn < 0.0:
            return nn
    return nn


@njit(nogil=True, cache=True)
def rest_scan(M, i, n, vw, codes, lo, hi, nn, best_sq, prune, stats):
    """Ascending scan of ``[lo, hi)`` skipping the window around i and i's own word."""
    h = codes[i]
    stop = min(hi, i - n + 1)
    for j in range(lo, stop):
        if codes[j] != h:
            nn = _visit(M, i, j, vw, nn, best_sq, prune, stats)
            if nn < 0.0:
                return nn
    for j in range(max(lo, i + n), hi):
        if codes[j] != h:
            nn = _visit(M, i, j, vw, nn, best_sq, prune, stats)
            if nn < 0.0:
                return nn
    return nn


@njit(nogil=True, cache=True)
def nn_scan(M, i, n, vw, codes, order, offsets, best_sq, prune, stats):
    nn = bucket_scan(M, i, n, vw, codes, order, offsets, _INF, best_sq, prune, stats)
    if nn < 0.0:
        return nn
    return rest_scan(M, i, n, vw, codes, 0, M.shape[0], nn, best_sq, prune, stats)


@njit(nogil=True, cache=True)
def hotsax(M, n, vw, codes, order, offsets, outer, prune,
           best_sq, best_pos, spin, hist_sq, hist_pos, hist_len, stats):
    for idx in range(outer.shape[0]):
        i = outer[idx]
        nn = nn_scan(M, i, n, vw, codes, order, offsets, best_sq, prune, stats)
        if nn >= 0.0 and nn < _INF:
            offer(best_sq, best_pos, spin, hist_sq, hist_pos, hist_len, i, nn)


@njit(nogil=True, cache=True)
def potential_rest_worker(M, i, n, vw, codes, counter, grain, cand_min, abort,
                          best_sq, prune, stats):
    """One worker of the parallel non-bucket loop for candidate i.

    Grabs ``grain`` positions at a time; the abort flag is polled between
    grabs, so a prune found by one worker stops the others at their next
    chunk boundary.
    """
    N = M.shape[0]
    h = codes[i]
    while atomic_load(abort, 0) == 0:
        lo = atomic_add(counter, 0, grain)
        if lo >= N:
            return
        hi = min(lo + grain, N)
        for j in range(lo, hi):
            if (j > i - n and j < i + n) or codes[j] == h:
                continue
            thr = atomic_load(cand_min, 0) if prune else _INF
            d = sqdist_rows(M[i], M[j], vw, thr)
            stats[0] += 1
            if d < 0.0:
                stats[1] += 1
                continue
            if prune and d < atomic_load(best_sq, 0):
                atomic_store(abort, 0, 1)
                return
            atomic_min_f64(cand_min, d)


@njit(nogil=True, cache=True)
def refine_worker(M, n, vw, codes, order, offsets, outer, counter, chunk, prune,
                  best_sq, best_pos, spin, hist_sq, hist_pos, hist_len, stats):
    total = outer.shape[0]
    while True:
        start = atomic_add(counter, 0, chunk)
        if start >= total:
            return
        for idx in range(start, min(start + chunk, total)):
            i = outer[idx]
            nn = nn_scan(M, i, n, vw, codes, order, offsets, best_sq, prune, stats)
            if nn >= 0.0 and nn < _INF:
                offer(best_sq, best_pos, spin, hist_sq, hist_pos, hist_len, i, nn)


@njit(nogil=True, cache=True)
def brute_direct(M, n, vw):
    """Exact nearest-neighbour profile from every non-self pair, no pruning.

    Each unordered pair is evaluated once and serves both endpoints.
    """
    N = M.shape[0]
    nn = np.full(N, _INF)
    for i in range(N):
        for j in range(i + n, N):
            d = sqdist_rows(M[i], M[j], vw, _INF)
            if d < nn[i]:
                nn[i] = d
            if d < nn[j]:
                nn[j] = d
    return nn


@njit(nogil=True, cache=True, fastmath={"nnan", "ninf", "nsz"})
def brute_sweep(t, n, mu, invnorm, flat):
    """Nearest-neighbour profile via incrementally updated centred covariances.

    For the pair (i, i + k) the covariance of the raw windows is carried
    along each diagonal k with ``cov += df[i] * dg[i+k] + df[i+k] * dg[i]``,
    and ``d^2 = 2 n (1 - cov * invnorm_i * invnorm_j)``. Rows are processed
    one at a time so the inner loop runs over all diagonals and vectorizes.
    ``flat`` is 1.0 for degenerate windows (``invnorm`` 0 there), which
    turns ``d^2`` into ``n`` against a normal window and 0 against another
    flat one, matching the zero rows of the subsequence matrix.
    """
    N = t.shape[0] - n + 1
    nn = np.full(N, _INF)
    df = np.zeros(N)
    dg = np.zeros(N)
    for i in range(N - 1):
        df[i] = (t[i + n] - t[i]) * 0.5
        dg[i] = (t[i + n] - mu[i + 1]) + (t[i] - mu[i])
    cov = np.zeros(N)
    for k in range(n, N):
        s = 0.0
        for x in range(n):
            s += (t[x] - mu[0]) * (t[k + x] - mu[k])
        cov[k] = s
    two_n = 2.0 * n
    fn = float(n)
    for i in range(N - n):
        a = invnorm[i]
        fi = flat[i]
        dfi = df[i]
        dgi = dg[i]
        c = cov[n:N - i]
        inv = invnorm[i + n:N]
        fj = flat[i + n:N]
        nj = nn[i + n:N]
        dgj = dg[i + n:N]
        dfj = df[i + n:N]
        best = _INF
        for q in range(c.shape[0]):
            d = two_n * (1.0 - c[q] * a * inv[q]) - fn * (fi + fj[q])
            d = max(d, 0.0)
            best = min(best, d)
            nj[q] = min(nj[q], d)
            c[q] += dfi * dgj[q] + dfj[q] * dgi
        nn[i] = min(nn[i], best)
    return nn
