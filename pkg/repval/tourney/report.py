"""CSV-таблицы турнира: рейтинг, попарные победы, матрица, семейства.

Разделитель запятая, десятичная точка, окончания строк LF, UTF-8.
"""

import csv
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

from repval.schemas.match import StatsReport
from repval.tourney.stats import FamilyRow

RANKING_HEADER = (
    "rank", "player", "elo", "kd_ratio", "kills", "winrate", "games", "draws"
)
PAIRWISE_HEADER = ("player", "opponent", "wins")
CONTRAST_HEADER = ("family", "opponent_family", "wins", "losses")


def write_csv(path: Path, header: Sequence[str], rows: Iterable) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def ranking_rows(report: StatsReport) -> List[List[str]]:
    """Строки рейтинга для игроков, сыгравших хотя бы одну партию."""
    return [
        [
            str(rank),
            player.name,
            f"{player.elo:.2f}",
            f"{player.kd_ratio:.2f}",
            str(player.kills),
            f"{100.0 * player.winrate:.2f}%",
            str(player.games),
            str(player.draws),
        ]
        for rank, player in enumerate(report.active, start=1)
    ]


def pairwise_rows(report: StatsReport) -> List[List[str]]:
    """Ненулевые победы игрока над соперником в порядке рейтинга."""
    order = [player.name for player in report.active]
    return [
        [name, other, str(report.pairwise[name][other])]
        for name in order
        for other in order
        if report.pairwise[name][other] > 0
    ]


def winmatrix_rows(report: StatsReport) -> List[List[str]]:
    order = [player.name for player in report.active]
    return [
        [name] + [str(report.pairwise[name][other]) for other in order]
        for name in order
    ]


def write_reports(
    report: StatsReport,
    contrast: Sequence[FamilyRow],
    out_dir: Path
) -> Dict[str, Path]:
    """Запись ranking.csv, pairwise.csv, winmatrix.csv и contrast.csv.

    Returns:
        Пути записанных файлов по имени таблицы
    """
    order = [player.name for player in report.active]
    return {
        "ranking": write_csv(
            out_dir / "ranking.csv",
            RANKING_HEADER,
            ranking_rows(report),
        ),
        "pairwise": write_csv(
            out_dir / "pairwise.csv",
            PAIRWISE_HEADER,
            pairwise_rows(report),
        ),
        "winmatrix": write_csv(
            out_dir / "winmatrix.csv",
            ["player"] + order,
            winmatrix_rows(report),
        ),
        "contrast": write_csv(
            out_dir / "contrast.csv",
            CONTRAST_HEADER,
            [list(row) for row in contrast],
        ),
    }
