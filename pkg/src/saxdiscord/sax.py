"""PAA reduction, SAX symbolization and the lexicographic word dictionary.

Symbols are the integers ``1..a`` for an alphabet of size ``a``; a word of
length ``w`` hashes to ``1 + sum((s_j - 1) * a**(w - j))``, which is a
bijection onto ``1..a**w`` that preserves lexicographic order.
"""
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import ParameterError
from .series import DEFAULT_WORD_LEN

DEFAULT_ALPHABET = 4
MAX_DICT_SIZE = 2 ** 24

# Inverse standard normal CDF at k/a, generated by tools/gen_breakpoints.py.
_BREAKPOINTS = {
    2: (0.0,),
    3: (-0.4307272992954574, 0.4307272992954573,),
    4: (-0.6744897501960817, 0.0, 0.6744897501960817,),
    5: (-0.8416212335729142, -0.2533471031357998, 0.2533471031357998, 0.8416212335729144,),
    6: (-0.9674215661017014, -0.4307272992954574, 0.0, 0.4307272992954573, 0.9674215661017014,),
    7: (-1.0675705238781417, -0.5659488219328631, -0.1800123697927051, 0.1800123697927049, 0.5659488219328631, 1.0675705238781414,),
    8: (-1.1503493803760079, -0.6744897501960817, -0.3186393639643751, 0.0, 0.3186393639643751, 0.6744897501960817, 1.1503493803760079,),
    9: (-1.2206403488473496, -0.7647096737863872, -0.4307272992954574, -0.1397102988818621, 0.1397102988818621, 0.4307272992954573, 0.7647096737863872, 1.2206403488473494,),
    10: (-1.2815515655446008, -0.8416212335729142, -0.5244005127080407, -0.2533471031357998, 0.0, 0.2533471031357998, 0.5244005127080407, 0.8416212335729144, 1.2815515655446008,),
}


@dataclass(frozen=True)
class Alphabet:
    """Equiprobable N(0, 1) bins; ``breakpoints`` holds the finite cut points."""

    size: int
    breakpoints: tuple

    def __post_init__(self):
        if self.size < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {self.size}")
        bp = tuple(float(b) for b in self.breakpoints)
        if len(bp) != self.size - 1:
            raise ParameterError(
                f"alphabet of size {self.size} needs {self.size - 1} breakpoints, got {len(bp)}"
            )
        if any(not np.isfinite(b) for b in bp) or any(x >= y for x, y in zip(bp, bp[1:])):
            raise ParameterError(f"breakpoints must be finite and strictly increasing: {bp}")
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def gaussian(cls, size=DEFAULT_ALPHABET):
        if size in _BREAKPOINTS:
            return cls(size, _BREAKPOINTS[size])
        if size < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {size}")
        dist = NormalDist()
        return cls(size, tuple(dist.inv_cdf(k / size) for k in range(1, size)))

    def dict_size(self, word_len):
        return self.size ** word_len


@dataclass(frozen=True)
class PaaMatrix:
    data: np.ndarray
    word_len: int


@dataclass(frozen=True)
class SaxMatrix:
    """``(N, word_len)`` symbols in ``1..alphabet_size``."""

    data: np.ndarray
    alphabet_size: int

    @property
    def word_len(self):
        return self.data.shape[1]


@dataclass(frozen=True)
class WordMatrix:
    """All ``alphabet_size ** word_len`` words, row ``h - 1`` hashing to ``h``."""

    data: np.ndarray
    alphabet_size: int

    @property
    def dict_size(self):
        return self.data.shape[0]


def paa_weights(n, word_len):
    """``(word_len, n)`` matrix mapping a length-n row to its PAA coordinates.

    Element ``t`` covers ``[t, t+1)`` and segment ``k`` covers
    ``[k n / w, (k+1) n / w)``; the weight is the overlap length times
    ``w / n``. Scaling both intervals by ``w`` keeps overlaps integral.
    """
    t = np.arange(n)
    lo_t, hi_t = t * word_len, (t + 1) * word_len
    k = np.arange(word_len)[:, None]
    lo_k, hi_k = k * n, (k + 1) * n
    overlap = np.clip(np.minimum(hi_t, hi_k) - np.maximum(lo_t, lo_k), 0, None)
    return overlap / n


def paa(matrix, word_len=DEFAULT_WORD_LEN):
    """Piecewise aggregate approximation of each row's first ``n`` columns."""
    n = matrix.n
    if word_len < 1 or word_len > n:
        raise ParameterError(f"word_len must be in 1..n={n}, got {word_len}")
    rows = matrix.data[:, :n]
    if n % word_len == 0:
        out = rows.reshape(rows.shape[0], word_len, n // word_len).mean(axis=2)
    else:
        out = rows @ paa_weights(n, word_len).T
    return PaaMatrix(np.ascontiguousarray(out), word_len)


def sax(paa_matrix, alphabet):
    """Map each PAA value v to the symbol j with ``beta_{j-1} <= v < beta_j``."""
    bp = np.asarray(alphabet.breakpoints)
    symbols = np.searchsorted(bp, paa_matrix.data, side="right") + 1
    return SaxMatrix(symbols.astype(np.int64), alphabet.size)


def _check_symbols(words, size):
    if words.size and (words.min() < 1 or words.max() > size):
        raise ParameterError(f"symbols must lie in 1..{size}")


def word_hash(word, alphabet):
    """Position (1-based) of ``word`` in the lexicographic word dictionary."""
    size = alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)
    w = np.asarray(word, dtype=np.int64)
    if w.ndim != 1:
        raise ParameterError("word must be a 1-d sequence of symbols")
    _check_symbols(w, size)
    h = 0
    for s in w.tolist():
        h = h * size + (s - 1)
    return h + 1


def word_codes(sax_matrix):
    """0-based hash of every row (``word_hash - 1``), vectorized."""
    words = sax_matrix.data
    size = sax_matrix.alphabet_size
    _check_symbols(words, size)
    codes = np.zeros(words.shape[0], dtype=np.int64)
    for j in range(words.shape[1]):
        codes = codes * size + (words[:, j] - 1)
    return codes


def build_word_matrix(alphabet, word_len=DEFAULT_WORD_LEN):
    size = alphabet.size
    if word_len < 1:
        raise ParameterError(f"word_len must be >= 1, got {word_len}")
    if size ** word_len > MAX_DICT_SIZE:
        raise ParameterError(
            f"dictionary of {size}**{word_len} words exceeds the {MAX_DICT_SIZE} limit"
        )
    codes = np.arange(size ** word_len, dtype=np.int64)
    powers = size ** np.arange(word_len - 1, -1, -1, dtype=np.int64)
    data = (codes[:, None] // powers) % size + 1
    return WordMatrix(data, size)
