"""Preparation stage: matrix, word dictionary, PAA, SAX and indexes."""
from dataclasses import dataclass

from .index import DiscordIndexes, build_indexes
from .sax import DEFAULT_ALPHABET, Alphabet, PaaMatrix, WordMatrix, build_word_matrix, paa, sax
from .series import DEFAULT_VEC_WIDTH, DEFAULT_WORD_LEN, SubsequenceMatrix, build_subsequence_matrix


@dataclass(frozen=True)
class Prepared:
    matrix: SubsequenceMatrix
    alphabet: Alphabet
    words: WordMatrix
    paa: PaaMatrix
    indexes: DiscordIndexes


def prepare(series, n, *, word_len=DEFAULT_WORD_LEN, alphabet=DEFAULT_ALPHABET,
            vec_width=DEFAULT_VEC_WIDTH, threads=1):
    """Run every preparation step for a discord search of length ``n``."""
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet.gaussian(alphabet)
    matrix = build_subsequence_matrix(series, n, vec_width, word_len=word_len)
    words = build_word_matrix(alphabet, word_len)
    reduced = paa(matrix, word_len)
    symbols = sax(reduced, alphabet)
    return Prepared(matrix, alphabet, words, reduced, build_indexes(symbols, threads))
