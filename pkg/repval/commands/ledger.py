"""Команда ledger: просмотр журнала матчей турнира."""

import logging
from typing import Callable, Optional

from repval.crud.match import MatchCRUD
from repval.database import (
    LEDGER_NAME,
    create_session_factory,
    get_db,
    ledger_url,
)
from repval.exceptions import ConfigurationError, NotFoundError
from repval.models.match import MatchRecord
from repval.schemas.config import RunConfig

logger = logging.getLogger(__name__)


def format_record(record: MatchRecord) -> str:
    """Одна строка журнала."""
    return (
        f"{record.id} {record.tournament}#{record.game_index} "
        f"{record.scenario.value} {record.player_a} vs {record.player_b}: "
        f"{record.winner.value}, убийств {record.kills_a}:{record.kills_b}, "
        f"шагов {record.steps}, seed {record.seed}"
    )


def cmd_ledger(
    config: RunConfig,
    match_id: Optional[int] = None,
    player: Optional[str] = None,
    skip: int = 0,
    limit: int = 20,
    echo: Callable[[str], None] = print
) -> int:
    """Матчи турнира tournament.name из reports/matches.db.

    С match_id выводится одна запись, иначе страница списка
    с фильтром по игроку.

    Returns:
        Код завершения

    Raises:
        ConfigurationError: Журнал отсутствует или пагинация некорректна
        NotFoundError: Матч с match_id не найден
    """
    if skip < 0 or limit < 1:
        raise ConfigurationError(
            f"Нужно --skip >= 0 и --limit >= 1: {skip}, {limit}"
        )
    reports_dir = config.paths.reports
    if not (reports_dir / LEDGER_NAME).exists():
        raise ConfigurationError(
            f"Журнал не найден: {reports_dir / LEDGER_NAME}"
        )
    session_factory = create_session_factory(ledger_url(reports_dir))

    db_gen = get_db(session_factory)
    db = next(db_gen)
    try:
        if match_id is not None:
            record = MatchCRUD.get_match(db, match_id)
            if record is None:
                raise NotFoundError(f"Матч {match_id} не найден")
            echo(format_record(record))
            return 0
        records = MatchCRUD.get_matches(
            db,
            config.tournament.name,
            skip=skip,
            limit=limit,
            player=player,
        )
        logger.info(
            "Журнал %s: %d записей", config.tournament.name, len(records)
        )
        for record in records:
            echo(format_record(record))
    finally:
        db_gen.close()
    return 0
