"""Турнир с рейтингом Эло."""

from repval.tourney.elo import EloTable, elo_update, expected_score
from repval.tourney.match import evaluate, play_match
from repval.tourney.policies import Player, learner_player, load_player
from repval.tourney.report import write_reports
from repval.tourney.schedule import Fixture, schedule
from repval.tourney.stats import compute_stats, family_contrast
from repval.tourney.tournament import (
    TournamentOutcome,
    fold_results,
    run_tournament,
)

__all__ = [
    "EloTable",
    "Fixture",
    "Player",
    "TournamentOutcome",
    "compute_stats",
    "elo_update",
    "evaluate",
    "expected_score",
    "family_contrast",
    "fold_results",
    "learner_player",
    "load_player",
    "play_match",
    "run_tournament",
    "schedule",
    "write_reports",
]
