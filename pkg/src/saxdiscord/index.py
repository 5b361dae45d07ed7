"""Search-order indexes derived from the SAX words.

Positions here are 0-based row numbers of the subsequence matrix.

- ``FrequencyIndex``: how many rows share each row's word.
- ``CandidateIndex``: ascending positions whose word is globally rarest;
  these are visited first as likely discords.
- ``WordIndex``: an inverted index, word hash -> ascending positions, stored
  as CSR (``order`` sorted by word, ``offsets`` per word). Same-word rows are
  scanned first as likely near neighbours.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .sax import SaxMatrix, word_codes

# Minimum positions per worker before histogram building is split.
_PARALLEL_GRAIN = 1 << 16


@dataclass(frozen=True)
class FrequencyIndex:
    freq: np.ndarray


@dataclass(frozen=True)
class CandidateIndex:
    positions: np.ndarray

    def __len__(self):
        return self.positions.shape[0]


@dataclass(frozen=True)
class WordIndex:
    order: np.ndarray
    offsets: np.ndarray

    @property
    def dict_size(self):
        return self.offsets.shape[0] - 1

    def bucket(self, h):
        """Ascending positions whose word hashes to ``h`` (1-based)."""
        return self.order[self.offsets[h - 1]:self.offsets[h]]

    def sizes(self):
        return np.diff(self.offsets)


@dataclass(frozen=True)
class DiscordIndexes:
    """Everything the pruned engines need besides the subsequence matrix."""

    sax: SaxMatrix
    codes: np.ndarray
    frequency: FrequencyIndex
    candidates: CandidateIndex
    words: WordIndex

    @property
    def N(self):
        return self.codes.shape[0]


def _histogram(codes, dict_size, threads=1):
    """Word counts; per-worker partial histograms merged once."""
    N = codes.shape[0]
    workers = max(1, min(threads, N // _PARALLEL_GRAIN))
    if workers == 1:
        return np.bincount(codes, minlength=dict_size)
    bounds = np.linspace(0, N, workers + 1).astype(np.int64)
    chunks = [codes[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: np.bincount(c, minlength=dict_size), chunks))
    return np.sum(parts, axis=0)


def _dict_size(sax):
    return sax.alphabet_size ** sax.word_len


def build_frequency_index(sax, threads=1):
    codes = word_codes(sax)
    counts = _histogram(codes, _dict_size(sax), threads)
    return FrequencyIndex(counts[codes])


def build_candidate_index(frequency):
    freq = frequency.freq
    if freq.size == 0:
        return CandidateIndex(np.empty(0, dtype=np.int64))
    return CandidateIndex(np.flatnonzero(freq == freq.min()).astype(np.int64))


def build_word_index(sax, alphabet=None):
    # alphabet is accepted for symmetry with word_hash; sax carries its size
    if alphabet is not None and alphabet.size != sax.alphabet_size:
        raise ValueError("alphabet does not match the SAX matrix")
    codes = word_codes(sax)
    dict_size = _dict_size(sax)
    order = np.argsort(codes, kind="stable").astype(np.int64)
    offsets = np.zeros(dict_size + 1, dtype=np.int64)
    np.cumsum(np.bincount(codes, minlength=dict_size), out=offsets[1:])
    return WordIndex(order, offsets)


def build_indexes(sax, threads=1):
    codes = word_codes(sax)
    frequency = build_frequency_index(sax, threads)
    return DiscordIndexes(
        sax=sax,
        codes=codes,
        frequency=frequency,
        candidates=build_candidate_index(frequency),
        words=build_word_index(sax),
    )
