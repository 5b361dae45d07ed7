"""Pure-numpy counterparts of the kernels in ``_jit``.

Neighbour scans evaluate distances in geometrically growing blocks, so the
pruning break takes effect at block granularity: a whole block is computed
(and counted) even when its first entry already prunes the candidate.
Parallel loops run on Python threads with lock-protected counters.
"""
import threading

import numpy as np

_FIRST_BLOCK = 16
_MAX_BLOCK = 4096


def block_sqdist(M, i, js):
    # Per-row reduction over the contiguous axis; identical for a pair
    # regardless of which block it lands in.
    return ((M[js] - M[i]) ** 2).sum(axis=1)


def _grow(size):
    return min(_MAX_BLOCK, size * 2)


def _bucket_blocks(i, n, bucket):
    same = bucket[np.abs(bucket - i) >= n]
    size, s = _FIRST_BLOCK, 0
    while s < same.shape[0]:
        yield same[s:s + size]
        s += size
        size = _grow(size)


def _rest_blocks(i, n, N, codes, lo=0, hi=None):
    hi = N if hi is None else hi
    h = codes[i]
    size = _FIRST_BLOCK
    for a, b in ((lo, min(hi, i - n + 1)), (max(lo, i + n), hi)):
        s = a
        while s < b:
            e = min(b, s + size)
            js = np.arange(s, e)
            js = js[codes[js] != h]
            if js.shape[0]:
                yield js
            s = e
            size = _grow(size)


def _consume(M, i, blocks, nn, shared, prune, stats):
    for js in blocks:
        d = block_sqdist(M, i, js)
        stats[0] += js.shape[0]
        if prune and (d < shared.best_sq[0]).any():
            return -1.0
        nn = min(nn, float(d.min()))
    return nn


def nn_scan(M, i, n, codes, words, shared, prune, stats):
    bucket = words.bucket(codes[i] + 1)
    nn = _consume(M, i, _bucket_blocks(i, n, bucket), np.inf, shared, prune, stats)
    if nn < 0.0:
        return nn
    return _consume(M, i, _rest_blocks(i, n, M.shape[0], codes), nn, shared, prune, stats)


def hotsax(M, n, codes, words, outer, shared, prune, stats):
    for i in outer.tolist():
        nn = nn_scan(M, i, n, codes, words, shared, prune, stats)
        if 0.0 <= nn < np.inf:
            shared.offer(nn, i)


class _Counter:
    def __init__(self):
        self._next = 0
        self._lock = threading.Lock()

    def grab(self, k):
        with self._lock:
            start = self._next
            self._next += k
            return start


def potential_rest(M, i, n, codes, nn, shared, prune, stats_rows, pool, threads, grain):
    """Parallel non-bucket loop for candidate i; returns final nn or -1.0."""
    N = M.shape[0]
    counter = _Counter()
    abort = threading.Event()
    lock = threading.Lock()
    best = [nn]

    def work(stats):
        while not abort.is_set():
            lo = counter.grab(grain)
            if lo >= N:
                return
            for js in _rest_blocks(i, n, N, codes, lo, min(lo + grain, N)):
                d = block_sqdist(M, i, js)
                stats[0] += js.shape[0]
                if prune and (d < shared.best_sq[0]).any():
                    abort.set()
                    return
                with lock:
                    best[0] = min(best[0], float(d.min()))

    _fan_out(pool, threads, work, stats_rows)
    return -1.0 if abort.is_set() else best[0]


def refine(M, n, codes, words, outer, shared, prune, stats_rows, pool, threads, chunk):
    counter = _Counter()
    total = outer.shape[0]

    def work(stats):
        while True:
            start = counter.grab(chunk)
            if start >= total:
                return
            for i in outer[start:start + chunk].tolist():
                nn = nn_scan(M, i, n, codes, words, shared, prune, stats)
                if 0.0 <= nn < np.inf:
                    shared.offer(nn, i)

    _fan_out(pool, threads, work, stats_rows)


def _fan_out(pool, threads, work, stats_rows):
    if threads == 1 or pool is None:
        work(stats_rows[0])
        return
    futures = [pool.submit(work, stats_rows[w]) for w in range(threads)]
    for f in futures:
        f.result()


def brute_direct(M, n):
    N = M.shape[0]
    nn = np.full(N, np.inf)
    for i in range(N - n):
        d = block_sqdist(M, i, np.arange(i + n, N))
        nn[i] = min(nn[i], d.min())
        np.minimum(nn[i + n:], d, out=nn[i + n:])
    return nn


def brute_sweep(t, n, mu, invnorm, flat):
    N = t.shape[0] - n + 1
    nn = np.full(N, np.inf)
    df = np.zeros(N)
    dg = np.zeros(N)
    df[:-1] = (t[n:] - t[:N - 1]) * 0.5
    dg[:-1] = (t[n:] - mu[1:]) + (t[:N - 1] - mu[:-1])
    windows = np.lib.stride_tricks.sliding_window_view(t, n)
    cov = np.zeros(N)
    cov[n:] = (windows[n:] - mu[n:, None]) @ (windows[0] - mu[0])
    for i in range(N - n):
        c = cov[n:N - i]
        d = 2.0 * n * (1.0 - c * invnorm[i] * invnorm[i + n:]) - n * (flat[i] + flat[i + n:])
        np.maximum(d, 0.0, out=d)
        nn[i] = min(nn[i], d.min())
        np.minimum(nn[i + n:], d, out=nn[i + n:])
        c += df[i] * dg[i + n:] + df[i + n:] * dg[i]
    return nn
