import numpy as np
import pytest

from saxdiscord import (
    Alphabet,
    build_candidate_index,
    build_frequency_index,
    build_indexes,
    build_word_index,
    word_hash,
)
from saxdiscord.index import FrequencyIndex
from saxdiscord.sax import SaxMatrix

A = [1, 1, 2, 1]  # hash 5 over |A|=4
B = [1, 1, 3, 1]  # hash 9
C = [4, 3, 2, 1]


def _sax(words, size=4):
    return SaxMatrix(np.asarray(words, dtype=np.int64), size)


def test_hash_values_of_fixture_words():
    a4 = Alphabet.gaussian(4)
    assert word_hash(A, a4) == 5 and word_hash(B, a4) == 9


def test_frequency_all_identical():
    assert build_frequency_index(_sax([A] * 6)).freq.tolist() == [6] * 6


def test_frequency_all_distinct():
    assert build_frequency_index(_sax([A, B, C])).freq.tolist() == [1, 1, 1]


def test_frequency_by_hand():
    freq = build_frequency_index(_sax([A, B, A, C, A])).freq
    assert freq.tolist() == [3, 1, 3, 1, 3]


@pytest.mark.parametrize("freq, expected", [
    ([3, 1, 3, 1, 3], [1, 3]),
    ([2, 2, 2, 2], [0, 1, 2, 3]),
    ([1, 2, 2], [0]),
])
def test_candidates(freq, expected):
    cand = build_candidate_index(FrequencyIndex(np.array(freq)))
    assert cand.positions.tolist() == expected


def test_word_index_by_hand():
    index = build_word_index(_sax([A, B, A]), Alphabet.gaussian(4))
    assert index.bucket(5).tolist() == [0, 2]
    assert index.bucket(9).tolist() == [1]
    sizes = index.sizes()
    assert sizes.sum() == 3 and np.count_nonzero(sizes) == 2


def test_word_index_single_row():
    index = build_word_index(_sax([C]))
    assert np.count_nonzero(index.sizes()) == 1


def test_word_index_alphabet_mismatch():
    with pytest.raises(ValueError):
        build_word_index(_sax([C]), Alphabet.gaussian(3))


def _random_sax(N, seed, size=4, w=4):
    rng = np.random.default_rng(seed)
    # skewed symbol distribution so word frequencies vary widely
    return _sax(rng.choice(np.arange(1, size + 1), size=(N, w), p=[0.55, 0.25, 0.15, 0.05]), size)


@pytest.mark.parametrize("seed", range(5))
def test_word_index_partition_and_order(seed):
    s = _random_sax(3000, seed)
    index = build_word_index(s)
    assert index.sizes().sum() == 3000
    seen = np.concatenate([index.bucket(h) for h in range(1, index.dict_size + 1)])
    assert sorted(seen.tolist()) == list(range(3000))
    a4 = Alphabet.gaussian(4)
    for h in range(1, index.dict_size + 1):
        b = index.bucket(h)
        assert np.all(np.diff(b) > 0)
        for k in b[:3]:
            assert word_hash(s.data[k], a4) == h


@pytest.mark.parametrize("seed", range(5))
def test_frequency_bucket_cross_consistency(seed):
    idx = build_indexes(_random_sax(3000, seed))
    sizes = idx.words.sizes()
    assert np.array_equal(idx.frequency.freq, sizes[idx.codes])
    counts = sizes[sizes > 0]
    assert (counts * counts).sum() == idx.frequency.freq.sum()


@pytest.mark.parametrize("seed", range(5))
def test_candidate_minimality(seed):
    idx = build_indexes(_random_sax(3000, seed))
    freq = idx.frequency.freq
    cand = idx.candidates.positions
    others = np.setdiff1d(np.arange(freq.size), cand)
    assert np.all(freq[cand] == freq.min())
    assert np.all(np.diff(cand) > 0)
    assert others.size == 0 or freq[others].min() > freq[cand].max()


def test_indexes_independent_of_thread_count():
    s = _random_sax(300_000, 11)
    one = build_indexes(s, threads=1)
    many = build_indexes(s, threads=4)
    assert np.array_equal(one.frequency.freq, many.frequency.freq)
    assert np.array_equal(one.candidates.positions, many.candidates.positions)
    assert np.array_equal(one.words.order, many.words.order)
