"""Pydantic схемы."""

from repval.schemas.config import (
    GRID_PRESETS,
    AlgoConfig,
    GridConfig,
    PathsConfig,
    PlayerSpec,
    RunConfig,
    TournamentConfig,
    TrainConfig,
)
from repval.schemas.match import MatchResult, PlayerStats, StatsReport

__all__ = [
    "GRID_PRESETS",
    "AlgoConfig",
    "GridConfig",
    "MatchResult",
    "PathsConfig",
    "PlayerSpec",
    "PlayerStats",
    "RunConfig",
    "StatsReport",
    "TournamentConfig",
    "TrainConfig",
]
