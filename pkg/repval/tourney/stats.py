"""Статистика турнира по списку результатов."""

from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

from repval.models.enums import Winner
from repval.schemas.match import MatchResult, PlayerStats, StatsReport
from repval.tourney.elo import EloTable


def compute_stats(
    names: Sequence[str],
    results: Sequence[MatchResult],
    elo: EloTable
) -> StatsReport:
    """Сводка по игрокам и матрица побед.

    Игроки упорядочены по убыванию рейтинга, при равенстве по имени.
    """
    tally = {
        name: {"kills": 0, "deaths": 0, "wins": 0, "losses": 0, "draws": 0}
        for name in names
    }
    pairwise: Dict[str, Dict[str, int]] = {
        name: {other: 0 for other in names} for name in names
    }
    for result in results:
        a, b = result.player_a, result.player_b
        tally[a]["kills"] += result.kills_a
        tally[a]["deaths"] += result.kills_b
        tally[b]["kills"] += result.kills_b
        tally[b]["deaths"] += result.kills_a
        if result.winner is Winner.DRAW:
            tally[a]["draws"] += 1
            tally[b]["draws"] += 1
            continue
        winner, loser = (a, b) if result.winner is Winner.A else (b, a)
        tally[winner]["wins"] += 1
        tally[loser]["losses"] += 1
        pairwise[winner][loser] += 1

    players = []
    for name in names:
        row = tally[name]
        games = row["wins"] + row["losses"] + row["draws"]
        players.append(PlayerStats(
            name=name,
            elo=elo.rating(name),
            kd_ratio=row["kills"] / max(row["deaths"], 1),
            games=games,
            winrate=row["wins"] / games if games else 0.0,
            **row,
        ))
    players.sort(key=lambda p: (-p.elo, p.name))
    return StatsReport(players=players, pairwise=pairwise)


class FamilyRow(NamedTuple):
    """Строка сводной таблицы семейств."""

    family: str
    opponent_family: str
    wins: int
    losses: int


def family_contrast(
    families: Mapping[str, str],
    results: Sequence[MatchResult]
) -> List[FamilyRow]:
    """Победы и поражения семейства против другого семейства.

    Args:
        families: Семейство по имени игрока
        results: Результаты матчей

    Returns:
        Строки для всех упорядоченных пар различных семейств, встречавшихся
        в матчах, по алфавиту
    """
    counts: Dict[Tuple[str, str], List[int]] = {}
    for result in results:
        fam_a = families[result.player_a]
        fam_b = families[result.player_b]
        if fam_a == fam_b:
            continue
        for pair in ((fam_a, fam_b), (fam_b, fam_a)):
            counts.setdefault(pair, [0, 0])
        if result.winner is Winner.A:
            counts[(fam_a, fam_b)][0] += 1
            counts[(fam_b, fam_a)][1] += 1
        elif result.winner is Winner.B:
            counts[(fam_b, fam_a)][0] += 1
            counts[(fam_a, fam_b)][1] += 1
    return [
        FamilyRow(family, opponent, wins, losses)
        for (family, opponent), (wins, losses) in sorted(counts.items())
    ]
