"""Команда tournament: турнир игроков из конфигурации."""

import logging
from typing import Dict

from repval.crud.match import MatchCRUD
from repval.database import create_session_factory, get_db, ledger_url
from repval.exceptions import ConfigurationError
from repval.learn.checkpoint import read_meta
from repval.schemas.config import PlayerSpec, RunConfig
from repval.tourney.policies import load_player
from repval.tourney.report import write_reports
from repval.tourney.stats import family_contrast
from repval.tourney.tournament import (
    fold_results,
    run_tournament,
    unknown_players,
)

logger = logging.getLogger(__name__)


def spec_family(spec: PlayerSpec) -> str:
    """Семейство игрока по описанию без загрузки сетей."""
    if spec.builtin is not None:
        return spec.builtin.value
    return str(read_meta(spec.checkpoint)["variant"])


def cmd_tournament(
    config: RunConfig,
    workers: int = 1,
    from_ledger: bool = False
) -> int:
    """Турнир и таблицы ranking/pairwise/winmatrix/contrast в reports/.

    Результаты сохраняются в журнал reports/matches.db под меткой
    турнира; повторный запуск заменяет записи метки. С from_ledger
    матчи не играются, рейтинг пересчитывается по журналу.

    Returns:
        Код завершения
    """
    tc = config.tournament
    reports_dir = config.paths.reports
    reports_dir.mkdir(parents=True, exist_ok=True)
    session_factory = create_session_factory(ledger_url(reports_dir))
    names = [spec.name for spec in tc.players]

    db_gen = get_db(session_factory)
    db = next(db_gen)
    try:
        if from_ledger:
            results = MatchCRUD.get_results(db, tc.name)
            unknown = unknown_players(names, results)
            if unknown:
                raise ConfigurationError(
                    f"Журнал турнира {tc.name} содержит игроков вне "
                    f"tournament.players: {', '.join(unknown)}"
                )
            logger.info(
                "Турнир %s: %d результатов из журнала",
                tc.name,
                len(results),
            )
            report, _ = fold_results(
                names,
                results,
                tc.k_factor,
                tc.initial_rating,
            )
            families: Dict[str, str] = {
                spec.name: spec_family(spec) for spec in tc.players
            }
            contrast = family_contrast(families, results)
        else:
            players = [load_player(spec) for spec in tc.players]
            outcome = run_tournament(
                players,
                tc.scenario,
                tc.n_games,
                tc.seed,
                config.env,
                k_factor=tc.k_factor,
                initial_rating=tc.initial_rating,
                workers=workers,
            )
            MatchCRUD.delete_tournament(db, tc.name)
            MatchCRUD.record_results(db, tc.name, outcome.results)
            report, contrast = outcome.report, outcome.contrast
    finally:
        db_gen.close()

    paths = write_reports(report, contrast, reports_dir)
    for player in report.active[:5]:
        print(
            f"{player.name}: Эло {player.elo:.2f}, "
            f"побед {100.0 * player.winrate:.2f}%, партий {player.games}"
        )
    print(f"Таблицы: {', '.join(str(p) for p in paths.values())}")
    return 0
