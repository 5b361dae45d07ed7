from .engines import (
    ENGINES,
    StageResult,
    brute_force_discord,
    brute_pair_count,
    hotsax_discord,
    phidd_discord,
    potential_discord_stage,
    refine_discord_stage,
    run_engine,
)
from .state import DiscordResult, SharedBest, count_distance_calls

__all__ = [
    "ENGINES",
    "DiscordResult",
    "SharedBest",
    "StageResult",
    "brute_force_discord",
    "brute_pair_count",
    "count_distance_calls",
    "hotsax_discord",
    "phidd_discord",
    "potential_discord_stage",
    "refine_discord_stage",
    "run_engine",
]
