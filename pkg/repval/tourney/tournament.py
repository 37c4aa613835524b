"""Турнир: расписание, матчи, свёртка рейтинга и статистики."""

import logging
import multiprocessing as mp
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from repval.exceptions import ContractViolation
from repval.models.enums import Scenario
from repval.schemas.config import GridConfig
from repval.schemas.match import MatchResult, StatsReport
from repval.tourney.elo import EloTable, outcome_of
from repval.tourney.match import play_match
from repval.tourney.policies import Player
from repval.tourney.schedule import Fixture, schedule
from repval.tourney.stats import FamilyRow, compute_stats, family_contrast

logger = logging.getLogger(__name__)


@dataclass
class TournamentOutcome:
    """Итог турнира."""

    report: StatsReport
    elo: EloTable
    results: List[MatchResult] = field(default_factory=list)
    contrast: List[FamilyRow] = field(default_factory=list)


def unknown_players(
    names: Sequence[str],
    results: Sequence[MatchResult]
) -> List[str]:
    """Имена из результатов, которых нет среди names, по алфавиту."""
    known = set(names)
    return sorted({
        name
        for result in results
        for name in (result.player_a, result.player_b)
        if name not in known
    })


def fold_results(
    names: Sequence[str],
    results: Sequence[MatchResult],
    k_factor: float = 32.0,
    initial_rating: float = 1200.0
) -> Tuple[StatsReport, EloTable]:
    """Свёртка результатов в порядке расписания в рейтинг и статистику.

    Returns:
        (StatsReport, EloTable)

    Raises:
        ContractViolation: Результат называет игрока не из names
    """
    unknown = unknown_players(names, results)
    if unknown:
        raise ContractViolation(
            f"Игроки не участвуют в турнире: {', '.join(unknown)}"
        )
    elo = EloTable.create(names, k_factor, initial_rating)
    for result in results:
        elo.apply(result.player_a, result.player_b, outcome_of(result.winner))
    return compute_stats(names, results, elo), elo


def _play_all(
    fixtures: Sequence[Fixture],
    by_name: dict,
    scenario: Scenario,
    config: GridConfig,
    workers: int
) -> List[MatchResult]:
    args = [
        (by_name[f.player_a], by_name[f.player_b], scenario, config, f.seed)
        for f in fixtures
    ]
    if workers > 1 and len(args) > 1:
        with mp.Pool(processes=workers) as pool:
            return pool.starmap(play_match, args)

    results = []
    milestone = max(1, len(args) // 10)
    for index, item in enumerate(args, start=1):
        results.append(play_match(*item))
        if index % milestone == 0:
            logger.info("Сыграно %d/%d партий", index, len(args))
    return results


def run_tournament(
    players: Sequence[Player],
    scenario: Scenario,
    n_games: int,
    seed: int,
    config: GridConfig,
    k_factor: float = 32.0,
    initial_rating: float = 1200.0,
    workers: int = 1,
    on_result: Optional[Callable[[int, MatchResult], None]] = None
) -> TournamentOutcome:
    """Полный турнир.

    Партии могут играться параллельно, рейтинг сворачивается
    последовательно в порядке расписания.

    Args:
        players: Игроки с уникальными именами
        scenario: Сценарий
        n_games: Число партий
        seed: Зерно расписания
        config: Параметры мира
        k_factor: Коэффициент K
        initial_rating: Стартовый рейтинг
        workers: Число процессов для матчей
        on_result: Вызывается для каждого результата (номер, результат)

    Raises:
        ContractViolation: Повторяющиеся имена или меньше двух игроков
    """
    names = [player.name for player in players]
    if len(set(names)) != len(names):
        raise ContractViolation("Имена игроков должны быть уникальны")
    by_name = {player.name: player for player in players}
    for player in players:
        player.policy.check(config)

    fixtures = schedule(names, n_games, seed)
    logger.info(
        "Турнир: %d игроков, %d партий, сценарий %s, процессов %d",
        len(players),
        n_games,
        scenario.value,
        workers,
    )
    results = _play_all(fixtures, by_name, scenario, config, workers)
    if on_result:
        for index, result in enumerate(results):
            on_result(index, result)

    report, elo = fold_results(names, results, k_factor, initial_rating)
    families = {player.name: player.family for player in players}
    return TournamentOutcome(
        report,
        elo,
        list(results),
        family_contrast(families, results),
    )
