import math
import threading

import numpy as np
import pytest

from saxdiscord import (
    InfeasibleInputError,
    SharedBest,
    brute_force_discord,
    build_subsequence_matrix,
    count_distance_calls,
    hotsax_discord,
    phidd_discord,
    potential_discord_stage,
    prepare,
    refine_discord_stage,
)
from saxdiscord.discovery import brute_pair_count
from saxdiscord.io import generate_series

from conftest import BACKENDS, random_walk
import oracles


def _prep(t, n, **kw):
    return prepare(t, n, **kw)


def _overlaps(result, p, n):
    return result.index <= p < result.index + n


# ---------------------------------------------------------------- brute force

@pytest.mark.parametrize("method", ["direct", "sweep"])
@pytest.mark.parametrize("seed, m, n", [(0, 60, 5), (1, 80, 8), (2, 90, 12), (3, 41, 20)])
def test_brute_matches_naive_oracle(backend, method, seed, m, n):
    t = random_walk(m, seed)
    idx, sq, _ = oracles.discord(t.tolist(), n)
    mat = build_subsequence_matrix(t, n, 8)
    res = brute_force_discord(mat, method=method, backend=backend)
    assert res.index == idx
    assert res.dist == pytest.approx(math.sqrt(sq), rel=1e-9)
    profile = oracles.nn_profile(t.tolist(), n)
    finite = np.isfinite(profile)
    np.testing.assert_array_equal(np.isfinite(res.nn_profile), finite)
    np.testing.assert_allclose(res.nn_profile[finite], np.array(profile)[finite],
                               rtol=1e-9, atol=1e-9)


def test_brute_thirteen_points(backend):
    t = [0, 1, 0, 1, 0, 1, 9, 1, 0, 1, 0, 1, 0]
    mat = build_subsequence_matrix(t, 3, 8, word_len=3)
    res = brute_force_discord(mat, backend=backend)
    assert _overlaps(res, 6, 3)
    idx, sq, argmax = oracles.discord(t, 3)
    assert res.index in argmax
    assert res.dist == pytest.approx(math.sqrt(sq), rel=1e-12)


def test_brute_perturbed_half(backend):
    # whole periods, so every window away from the bump has an exact twin
    half = np.sin(2 * np.pi * np.arange(50) / 25)
    t = np.concatenate([half, half])
    t[70] += 2.0
    mat = build_subsequence_matrix(t, 8, 8)
    res = brute_force_discord(mat, backend=backend)
    idx, sq, argmax = oracles.discord(t.tolist(), 8)
    assert res.index in argmax
    assert _overlaps(res, 70, 8)


@pytest.mark.parametrize("method", ["direct", "sweep"])
def test_constant_series_all_engines(backend, method):
    p = _prep(np.full(100, 4.0), 10)
    b = brute_force_discord(p.matrix, method=method, backend=backend)
    h = hotsax_discord(p.matrix, p.indexes, backend=backend)
    r = phidd_discord(p.matrix, p.indexes, threads=3, backend=backend)
    for res in (b, h, r):
        assert (res.pos, res.dist) == (1, 0.0)


def test_sweep_matches_direct_with_flat_windows(backend):
    t = random_walk(400, 8)
    t[100:160] = 2.0
    mat = build_subsequence_matrix(t, 16, 8)
    direct = brute_force_discord(mat, method="direct", backend=backend)
    sweep = brute_force_discord(mat, method="sweep", backend=backend)
    np.testing.assert_allclose(sweep.nn_profile, direct.nn_profile, rtol=1e-8, atol=1e-8)
    assert sweep.index == direct.index


@pytest.mark.parametrize("m, n", [(10, 10), (19, 10), (5, 4)])
def test_infeasible_inputs(m, n):
    p_mat = build_subsequence_matrix(random_walk(m, 0), n, 8)
    with pytest.raises(InfeasibleInputError):
        brute_force_discord(p_mat)


def test_smallest_feasible_input():
    t = random_walk(20, 5)
    p = _prep(t, 10)
    assert p.matrix.N == 11
    b = brute_force_discord(p.matrix)
    assert b.index in (0, 10)
    assert hotsax_discord(p.matrix, p.indexes).pos == b.pos


def test_brute_call_count_closed_form():
    for N, n in [(50, 5), (11, 10), (100, 1)]:
        expected = sum(1 for i in range(N) for j in range(N) if abs(i - j) >= n)
        assert brute_pair_count(N, n) == expected
    p = _prep(random_walk(200, 1), 16)
    res = brute_force_discord(p.matrix)
    assert count_distance_calls(res) == brute_pair_count(p.matrix.N, 16)


# --------------------------------------------------------------- pruned engines

@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n", [8, 16, 32])
def test_pruned_engines_equal_oracle(backend, seed, n):
    p = _prep(random_walk(600, seed), n)
    b = brute_force_discord(p.matrix, backend=backend)
    h = hotsax_discord(p.matrix, p.indexes, backend=backend)
    r = phidd_discord(p.matrix, p.indexes, threads=3, backend=backend)
    for res in (h, r):
        assert res.pos == b.pos
        assert res.dist == pytest.approx(b.dist, rel=1e-9)
        assert res.calls <= b.calls


def test_hotsax_calls_strictly_fewer_on_random_walks():
    for seed in range(10):
        p = _prep(random_walk(300, seed), 16)
        assert p.matrix.N >= 50
        assert hotsax_discord(p.matrix, p.indexes).calls < brute_force_discord(p.matrix).calls


def _bumped_sine(m, period, at, amp, n, alphabet):
    t = np.sin(2 * np.pi * np.arange(m) / period)
    t[at] += amp
    return _prep(t, n, alphabet=alphabet)


def _spike_with_unique_discord_word():
    # only the window starting at the bump gets a word that occurs nowhere else
    p = _bumped_sine(160, 16, 80, 0.5, 8, 3)
    b = brute_force_discord(p.matrix)
    assert p.indexes.candidates.positions.tolist() == [b.index] == [80]
    return p, b


def test_unique_word_discord_found_first(backend):
    p, b = _spike_with_unique_discord_word()
    shared = SharedBest(capacity=p.matrix.N + 1)
    h = hotsax_discord(p.matrix, p.indexes, backend=backend, shared=shared)
    assert h.pos == b.pos
    assert shared.history()[0][1] == b.index
    assert len(shared.history()) == 1


def test_hotsax_infeasible():
    p_mat = build_subsequence_matrix(random_walk(15, 0), 8, 8)
    with pytest.raises(InfeasibleInputError):
        hotsax_discord(p_mat, None)
    with pytest.raises(InfeasibleInputError):
        phidd_discord(p_mat, None, threads=2)


@pytest.mark.parametrize("seed", range(6))
def test_phidd_thread_count_invariance(backend, seed):
    p = _prep(random_walk(1500, 100 + seed), 32)
    results = {(r.pos, r.dist) for r in (phidd_discord(p.matrix, p.indexes, threads=k,
                                                       backend=backend)
                                         for k in (1, 2, 4, 8))}
    assert len(results) == 1


@pytest.mark.parametrize("chunk", [1, 3, 64])
def test_phidd_chunk_size_does_not_change_result(chunk):
    p = _prep(random_walk(1200, 7), 24)
    b = brute_force_discord(p.matrix)
    r = phidd_discord(p.matrix, p.indexes, threads=4, chunk=chunk)
    assert (r.pos, r.dist) == (b.pos, pytest.approx(b.dist, rel=1e-12))


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("numba not installed")
    p = _prep(random_walk(800, 3), 20)
    a = phidd_discord(p.matrix, p.indexes, threads=2, backend="numba")
    b = phidd_discord(p.matrix, p.indexes, threads=2, backend="numpy")
    assert a.pos == b.pos and a.dist == pytest.approx(b.dist, rel=1e-12)


# ----------------------------------------------------------------------- stages

def test_stage_one_prunes_on_first_neighbour(backend):
    p = _prep(random_walk(800, 2), 16)
    shared = SharedBest()
    shared.offer(1e300, 0)
    stage = potential_discord_stage(p.matrix, p.indexes, shared, threads=1, backend=backend)
    if backend == "numba":
        # one evaluation per candidate: the first neighbour already prunes it
        assert stage.calls == len(p.indexes.candidates)
    else:
        assert stage.calls < len(p.indexes.candidates) * 64
    assert shared.value == (1e300, 0)


def _first_seed(predicate, m=600, n=16):
    for seed in range(300):
        p = _prep(random_walk(m, seed), n)
        if predicate(p):
            return p
    pytest.fail("no seed satisfied the construction")


def test_stage_one_single_candidate(backend):
    p, _ = _spike_with_unique_discord_word()
    i = int(p.indexes.candidates.positions[0])
    oracle_nn = brute_force_discord(p.matrix).nn_profile
    shared = SharedBest()
    stage = potential_discord_stage(p.matrix, p.indexes, shared, threads=4, backend=backend)
    assert stage.index == i
    assert stage.dist_sq == pytest.approx(oracle_nn[i], rel=1e-12)


def _bucket_all_overlapping(p):
    n = p.matrix.n
    words = p.indexes.words
    for i in p.indexes.candidates.positions.tolist():
        bucket = words.bucket(p.indexes.codes[i] + 1)
        if bucket.size < 2 or np.any(np.abs(bucket - i) >= n):
            return False
    return True


def test_stage_one_overlapping_word_cluster(backend):
    p = _bumped_sine(200, 12, 100, 3.0, 12, 3)
    assert _bucket_all_overlapping(p) and len(p.indexes.candidates) > 1
    oracle_nn = brute_force_discord(p.matrix).nn_profile
    cand = p.indexes.candidates.positions
    stage = potential_discord_stage(p.matrix, p.indexes, SharedBest(), threads=3,
                                    backend=backend)
    assert stage.dist_sq == pytest.approx(oracle_nn[cand].max(), rel=1e-12)
    assert stage.index == cand[np.argmax(oracle_nn[cand])]


def test_refine_keeps_stage_one_when_it_is_the_discord(backend):
    p, b = _spike_with_unique_discord_word()
    shared = SharedBest()
    first = potential_discord_stage(p.matrix, p.indexes, shared, backend=backend)
    final = refine_discord_stage(p.matrix, p.indexes, shared, threads=2, backend=backend)
    assert first.index == b.index
    assert final.index == first.index
    assert final.dist == pytest.approx(math.sqrt(first.dist_sq), rel=0)


def test_refine_corrects_a_frequent_word_discord(backend):
    def discord_outside_candidates(p):
        return brute_force_discord(p.matrix).index not in p.indexes.candidates.positions

    p = _first_seed(discord_outside_candidates)
    b = brute_force_discord(p.matrix)
    shared = SharedBest()
    first = potential_discord_stage(p.matrix, p.indexes, shared, threads=2, backend=backend)
    assert first.index != b.index
    final = refine_discord_stage(p.matrix, p.indexes, shared, threads=2, backend=backend)
    assert final.pos == b.pos
    assert final.dist == pytest.approx(b.dist, rel=1e-9)


# ------------------------------------------------------------------ invariants

@pytest.mark.parametrize("seed", range(4))
def test_disabling_pruning_does_not_change_result(backend, seed):
    p = _prep(random_walk(500, seed), 16)
    for run in (lambda **kw: hotsax_discord(p.matrix, p.indexes, backend=backend, **kw),
                lambda **kw: phidd_discord(p.matrix, p.indexes, threads=2, backend=backend, **kw)):
        pruned, full = run(), run(prune=False)
        assert (pruned.pos, pruned.dist) == (full.pos, full.dist)
        assert full.abandoned == 0


def test_unpruned_runs_visit_exactly_the_non_self_pairs(backend):
    # Every evaluated pair satisfies |i - j| >= n and each is visited once,
    # so an unpruned run performs exactly the closed-form number of calls.
    p = _prep(random_walk(300, 9), 16)
    expected = brute_pair_count(p.matrix.N, 16)
    assert hotsax_discord(p.matrix, p.indexes, prune=False, backend=backend).calls == expected
    r = phidd_discord(p.matrix, p.indexes, threads=3, prune=False, backend=backend)
    assert r.calls == expected


@pytest.mark.parametrize("seed", range(4))
def test_best_so_far_updates_strictly_increase(backend, seed):
    p = _prep(random_walk(900, seed), 24)
    for engine in ("hotsax", "phidd"):
        shared = SharedBest(capacity=p.matrix.N + 1)
        if engine == "hotsax":
            hotsax_discord(p.matrix, p.indexes, backend=backend, shared=shared)
        else:
            phidd_discord(p.matrix, p.indexes, threads=4, backend=backend, shared=shared)
        values = [sq for sq, _ in shared.history()]
        assert values and all(a < b for a, b in zip(values, values[1:]))


# ------------------------------------------------------------------ SharedBest

def test_shared_best_tie_goes_to_smaller_position():
    s = SharedBest()
    assert s.offer(2.0, 10)
    assert not s.offer(1.0, 3)
    assert s.offer(2.0, 4)
    assert not s.offer(2.0, 7)
    assert s.offer(3.0, 50)
    assert s.value == (3.0, 50)
    assert s.history() == [(2.0, 10), (2.0, 4), (3.0, 50)]


def test_shared_best_concurrent_python_offers():
    s = SharedBest(capacity=10_000)
    rng = np.random.default_rng(0)
    offers = [(float(v), i) for i, v in enumerate(rng.integers(0, 500, 4000))]
    chunks = [offers[k::8] for k in range(8)]
    threads = [threading.Thread(target=lambda c=c: [s.offer(*o) for o in c]) for c in chunks]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    top = max(v for v, _ in offers)
    assert s.value == (top, min(i for v, i in offers if v == top))


@pytest.mark.skipif("numba" not in BACKENDS, reason="numba not installed")
def test_shared_best_concurrent_kernel_offers():
    from saxdiscord.discovery import _jit

    s = SharedBest(capacity=10_000)
    rng = np.random.default_rng(1)
    values = rng.integers(0, 300, 6000).astype(float)
    state = (s.best_sq, s.best_pos, s.spin, s.hist_sq, s.hist_pos, s.hist_len)

    def work(k):
        for i in range(k, values.size, 8):
            _jit.offer(*state, i, values[i])

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    top = values.max()
    assert s.value == (top, int(np.flatnonzero(values == top)[0]))
    assert s.spin[0] == 0
    hist = s.history()
    assert all((a[0], -a[1]) < (b[0], -b[1]) for a, b in zip(hist, hist[1:]))


@pytest.mark.skipif("numba" not in BACKENDS, reason="numba not installed")
def test_atomic_primitives_under_contention():
    from numba import njit

    from saxdiscord.discovery._atomics import atomic_add
    from saxdiscord.discovery._jit import atomic_min_f64

    @njit(nogil=True)
    def grab_all(counter, total, hits):
        while True:
            k = atomic_add(counter, 0, 1)
            if k >= total:
                return
            hits[k] += 1

    @njit(nogil=True)
    def push_min(cell, values, start, step):
        for i in range(start, values.size, step):
            atomic_min_f64(cell, values[i])

    counter = np.zeros(1, dtype=np.int64)
    hits = np.zeros(200_000, dtype=np.int64)
    cell = np.array([np.inf])
    values = np.random.default_rng(2).uniform(1, 100, 200_000)
    workers = [threading.Thread(target=grab_all, args=(counter, hits.size, hits)) for _ in range(6)]
    workers += [threading.Thread(target=push_min, args=(cell, values, k, 6)) for k in range(6)]
    for t in workers:
        t.start()
    for t in workers:
        t.join()
    assert np.all(hits == 1)
    assert cell[0] == values.min()
