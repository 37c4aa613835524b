"""Модели данных."""

from repval.models.enums import (
    AlgoVariant,
    BuiltinPolicy,
    NeighborMode,
    Outcome,
    Scenario,
    Team,
    Winner,
)
from repval.models.match import MatchRecord

__all__ = [
    "AlgoVariant",
    "BuiltinPolicy",
    "MatchRecord",
    "NeighborMode",
    "Outcome",
    "Scenario",
    "Team",
    "Winner",
]
