"""Brute-force, HOTSAX and two-stage parallel discord engines.

All three return the subsequence whose nearest non-self match (|i - j| >= n)
is farthest away, breaking exact ties by the smallest position. The pruned
engines visit the rarest-word candidates first and, for every subsequence,
scan same-word neighbours before the rest; a neighbour closer than the
best-so-far discards the subsequence.
"""
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from .._backend import resolve_backend
from ..errors import InfeasibleInputError, ParameterError
from ..series import EPSILON_SIGMA
from . import _vec
from .state import DiscordResult, SharedBest

ENGINES = ("brute", "hotsax", "phidd")

# Above this many rows the brute-force engine switches to the O(1)-per-pair sweep.
DIRECT_MAX_ROWS = 4096
# Positions grabbed per fetch in the stage-one parallel neighbour loop.
INNER_GRAIN = 256

StageResult = namedtuple("StageResult", "index dist_sq calls abandoned")


def _jit():
    from . import _jit as mod

    return mod


def check_feasible(matrix, n=None):
    if n is not None and n != matrix.n:
        raise ParameterError(f"n={n} does not match the matrix subsequence length {matrix.n}")
    if matrix.N <= matrix.n:
        raise InfeasibleInputError(
            f"no subsequence has a non-self match: N={matrix.N} subsequences "
            f"of length n={matrix.n} need N >= n + 1 (series length >= 2n)"
        )


def brute_pair_count(N, n):
    """Ordered pairs (i, j) with |i - j| >= n among N subsequences."""
    k = max(0, N - n)
    return k * (k + 1)


def _pick(nn):
    finite = np.isfinite(nn)
    masked = np.where(finite, nn, -1.0)
    i = int(np.argmax(masked))
    return i, float(masked[i])


def brute_force_discord(matrix, n=None, *, method="auto", backend=None):
    """Exact discord from the full nearest-neighbour profile, without pruning.

    Parameters
    ----------
    matrix : SubsequenceMatrix
    n : int, optional
        Must equal ``matrix.n`` when given.
    method : {"auto", "direct", "sweep"}
        ``direct`` evaluates every non-self pair from the matrix rows.
        ``sweep`` carries centred covariances along diagonals of the raw
        series (O(1) per pair). ``auto`` uses direct up to
        ``DIRECT_MAX_ROWS`` rows.

    Returns
    -------
    DiscordResult
        ``nn_profile`` holds every subsequence's squared nearest-neighbour
        distance (``inf`` where no non-self match exists). ``calls`` is the
        number of ordered pairs covered: each evaluation of the symmetric
        distance serves both orderings.
    """
    check_feasible(matrix, n)
    backend = resolve_backend(backend)
    if method == "auto":
        method = "direct" if matrix.N <= DIRECT_MAX_ROWS else "sweep"
    if method == "direct":
        if backend == "numba":
            nn = _jit().brute_direct(matrix.data, matrix.n, matrix.vec_width)
        else:
            nn = _vec.brute_direct(matrix.data, matrix.n)
    elif method == "sweep":
        nn = _sweep(matrix, backend)
    else:
        raise ParameterError(f"unknown brute-force method {method!r}")
    i, sq = _pick(nn)
    calls = brute_pair_count(matrix.N, matrix.n)
    return DiscordResult("brute", i + 1, float(np.sqrt(sq)), calls, 0, matrix.n, 1, nn)


def _sweep(matrix, backend):
    n = matrix.n
    flat = (matrix.std < EPSILON_SIGMA).astype(np.float64)
    invnorm = np.where(flat > 0, 0.0, 1.0 / (np.where(flat > 0, 1.0, matrix.std) * np.sqrt(n)))
    t = matrix.series.values
    if backend == "numba":
        return _jit().brute_sweep(t, n, matrix.mean, invnorm, flat)
    return _vec.brute_sweep(t, n, matrix.mean, invnorm, flat)


def _check_threads(threads):
    if int(threads) != threads or threads < 1:
        raise ParameterError(f"threads must be a positive integer, got {threads}")
    return int(threads)


@contextmanager
def _worker_pool(threads):
    if threads == 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="discord") as pool:
        yield pool


def _fan_out(pool, threads, fn):
    if pool is None:
        fn(0)
        return
    for f in [pool.submit(fn, w) for w in range(threads)]:
        f.result()


def _shared_state(shared):
    return (shared.best_sq, shared.best_pos, shared.spin,
            shared.hist_sq, shared.hist_pos, shared.hist_len)


def _non_candidates(indexes):
    mask = np.ones(indexes.N, dtype=bool)
    mask[indexes.candidates.positions] = False
    return np.flatnonzero(mask).astype(np.int64)


def hotsax_discord(matrix, indexes, n=None, *, prune=True, backend=None, shared=None):
    """Sequential HOTSAX search.

    Subsequences are visited candidates first, then the remaining positions
    ascending. ``prune=False`` disables both the neighbour-loop break and
    partial-sum abandoning; the result is unchanged, only the work grows.
    Pass a fresh ``SharedBest`` as ``shared`` to inspect its update history.
    """
    check_feasible(matrix, n)
    backend = resolve_backend(backend)
    outer = np.concatenate([indexes.candidates.positions, _non_candidates(indexes)])
    shared = SharedBest(capacity=matrix.N + 1) if shared is None else shared
    stats = np.zeros(2, dtype=np.int64)
    if backend == "numba":
        _jit().hotsax(matrix.data, matrix.n, matrix.vec_width, indexes.codes,
                      indexes.words.order, indexes.words.offsets, outer, prune,
                      *_shared_state(shared), stats)
    else:
        _vec.hotsax(matrix.data, matrix.n, indexes.codes, indexes.words, outer,
                    shared, prune, stats)
    return shared.to_result("hotsax", stats[0], stats[1], matrix.n, 1)


def potential_discord_stage(matrix, indexes, shared, threads=1, *, prune=True,
                            backend=None, pool=None):
    """Stage one: search the candidate index.

    Candidates are processed one after another. For each, same-word
    neighbours are scanned sequentially, then all other positions by
    ``threads`` workers that grab ``INNER_GRAIN`` positions at a time. A
    neighbour closer than the best-so-far aborts the candidate; the workers
    notice at their next grab. Surviving candidates are offered to
    ``shared``.
    """
    threads = _check_threads(threads)
    backend = resolve_backend(backend)
    M, n, vw = matrix.data, matrix.n, matrix.vec_width
    codes, words = indexes.codes, indexes.words
    stats = np.zeros((threads, 2), dtype=np.int64)
    with _maybe_pool(pool, threads) as pool:
        for i in indexes.candidates.positions.tolist():
            if backend == "numba":
                jit = _jit()
                nn = jit.bucket_scan(M, i, n, vw, codes, words.order, words.offsets,
                                     np.inf, shared.best_sq, prune, stats[0])
                if nn < 0.0:
                    continue
                cand_min = np.array([nn])
                abort = np.zeros(1, dtype=np.int64)
                counter = np.zeros(1, dtype=np.int64)
                _fan_out(pool, threads, lambda w: jit.potential_rest_worker(
                    M, i, n, vw, codes, counter, INNER_GRAIN, cand_min, abort,
                    shared.best_sq, prune, stats[w]))
                if abort[0]:
                    continue
                nn = cand_min[0]
                if nn < np.inf:
                    jit.offer(*_shared_state(shared), i, nn)
            else:
                bucket = words.bucket(codes[i] + 1)
                nn = _vec._consume(M, i, _vec._bucket_blocks(i, n, bucket), np.inf,
                                   shared, prune, stats[0])
                if nn < 0.0:
                    continue
                nn = _vec.potential_rest(M, i, n, codes, nn, shared, prune, stats,
                                         pool, threads, INNER_GRAIN)
                if 0.0 <= nn < np.inf:
                    shared.offer(nn, i)
    sq, idx = shared.value
    calls, abandoned = stats.sum(axis=0).tolist()
    return StageResult(idx, sq, calls, abandoned)


def refine_discord_stage(matrix, indexes, shared, threads=1, *, chunk=1, prune=True,
                         backend=None, pool=None):
    """Stage two: every non-candidate, in parallel with dynamic scheduling.

    Workers grab ``chunk`` subsequences at a time from the ascending list of
    non-candidates and run the full same-word-then-rest neighbour scan on
    each, pruning against the live best-so-far.
    """
    threads = _check_threads(threads)
    if chunk < 1:
        raise ParameterError(f"chunk must be >= 1, got {chunk}")
    backend = resolve_backend(backend)
    outer = _non_candidates(indexes)
    stats = np.zeros((threads, 2), dtype=np.int64)
    M, n, vw = matrix.data, matrix.n, matrix.vec_width
    with _maybe_pool(pool, threads) as pool:
        if backend == "numba":
            jit = _jit()
            counter = np.zeros(1, dtype=np.int64)
            state = _shared_state(shared)
            _fan_out(pool, threads, lambda w: jit.refine_worker(
                M, n, vw, indexes.codes, indexes.words.order, indexes.words.offsets,
                outer, counter, chunk, prune, *state, stats[w]))
        else:
            _vec.refine(M, n, indexes.codes, indexes.words, outer, shared, prune,
                        stats, pool, threads, chunk)
    calls, abandoned = stats.sum(axis=0).tolist()
    return shared.to_result("phidd", calls, abandoned, n, threads)


@contextmanager
def _maybe_pool(pool, threads):
    if pool is not None:
        yield pool
        return
    with _worker_pool(threads) as own:
        yield own


def phidd_discord(matrix, indexes, n=None, threads=1, *, chunk=1, prune=True,
                  backend=None, shared=None):
    """Two-stage parallel search: candidate stage, then refinement stage.

    The result (position and distance) does not depend on ``threads``;
    ``calls`` does, because pruning races with the shared best-so-far.
    """
    check_feasible(matrix, n)
    threads = _check_threads(threads)
    shared = SharedBest(capacity=matrix.N + 1) if shared is None else shared
    with _worker_pool(threads) as pool:
        first = potential_discord_stage(matrix, indexes, shared, threads, prune=prune,
                                        backend=backend, pool=pool)
        result = refine_discord_stage(matrix, indexes, shared, threads, chunk=chunk,
                                      prune=prune, backend=backend, pool=pool)
    return DiscordResult("phidd", result.pos, result.dist,
                         result.calls + first.calls, result.abandoned + first.abandoned,
                         matrix.n, threads)


def run_engine(engine, matrix, indexes, threads=1, **kwargs):
    if engine == "brute":
        return brute_force_discord(matrix, **kwargs)
    if engine == "hotsax":
        return hotsax_discord(matrix, indexes, **kwargs)
    if engine == "phidd":
        return phidd_discord(matrix, indexes, threads=threads, **kwargs)
    raise ParameterError(f"engine must be one of {ENGINES}, got {engine!r}")
