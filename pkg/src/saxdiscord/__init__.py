"""Exact time-series discord discovery with SAX-ordered pruning."""
from .discovery import (
    DiscordResult,
    SharedBest,
    brute_force_discord,
    count_distance_calls,
    hotsax_discord,
    phidd_discord,
    potential_discord_stage,
    refine_discord_stage,
)
from .errors import DiscordError, InfeasibleInputError, ParameterError, ValidationError
from .index import (
    build_candidate_index,
    build_frequency_index,
    build_indexes,
    build_word_index,
)
from .pipeline import Prepared, prepare
from .sax import Alphabet, build_word_matrix, paa, sax, word_hash
from .series import (
    DistanceBudget,
    SubsequenceMatrix,
    TimeSeries,
    build_subsequence_matrix,
    squared_distance_early_abandon,
    z_normalize,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "DiscordError",
    "DiscordResult",
    "DistanceBudget",
    "InfeasibleInputError",
    "ParameterError",
    "Prepared",
    "SharedBest",
    "SubsequenceMatrix",
    "TimeSeries",
    "ValidationError",
    "brute_force_discord",
    "build_candidate_index",
    "build_frequency_index",
    "build_indexes",
    "build_subsequence_matrix",
    "build_word_index",
    "build_word_matrix",
    "count_distance_calls",
    "hotsax_discord",
    "paa",
    "phidd_discord",
    "potential_discord_stage",
    "prepare",
    "refine_discord_stage",
    "sax",
    "squared_distance_early_abandon",
    "word_hash",
    "z_normalize",
]
