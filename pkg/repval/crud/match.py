"""CRUD операции журнала матчей."""

from typing import List, Optional

from sqlalchemy import or_
from sqlalchemy.orm import Session

from repval.models.match import MatchRecord
from repval.schemas.match import MatchResult


class MatchCRUD:
    """Класс для CRUD операций с записями матчей."""

    @staticmethod
    def record_results(
        db: Session,
        tournament: str,
        results: List[MatchResult]
    ) -> int:
        """Сохранение результатов турнира одной транзакцией.

        Returns:
            Число сохранённых записей
        """
        db.add_all([
            MatchRecord(
                tournament=tournament,
                game_index=index,
                **result.model_dump()
            )
            for index, result in enumerate(results)
        ])
        db.commit()
        return len(results)

    @staticmethod
    def get_match(db: Session, match_id: int) -> Optional[MatchRecord]:
        """Получение записи по ID.

        Returns:
            Запись или None если не найдена
        """
        return db.query(MatchRecord).filter(MatchRecord.id == match_id).first()

    @staticmethod
    def get_matches(
        db: Session,
        tournament: Optional[str] = None,
        skip: int = 0,
        limit: int = 100,
        player: Optional[str] = None
    ) -> List[MatchRecord]:
        """Получение списка матчей с пагинацией и фильтрацией.

        Args:
            db: Сессия базы данных
            tournament: Фильтр по метке турнира
            skip: Количество записей для пропуска
            limit: Максимальное количество записей
            player: Фильтр по участнику (любая сторона)

        Returns:
            Записи в порядке расписания
        """
        query = db.query(MatchRecord)
        if tournament:
            query = query.filter(MatchRecord.tournament == tournament)
        if player:
            query = query.filter(or_(
                MatchRecord.player_a == player,
                MatchRecord.player_b == player,
            ))
        query = query.order_by(MatchRecord.tournament, MatchRecord.game_index)
        return query.offset(skip).limit(limit).all()

    @staticmethod
    def get_results(db: Session, tournament: str) -> List[MatchResult]:
        """Все результаты турнира в порядке расписания."""
        records = (
            db.query(MatchRecord)
            .filter(MatchRecord.tournament == tournament)
            .order_by(MatchRecord.game_index)
            .all()
        )
        return [MatchResult.model_validate(record) for record in records]

    @staticmethod
    def delete_tournament(db: Session, tournament: str) -> int:
        """Удаление всех записей турнира.

        Returns:
            Число удалённых записей
        """
        deleted = (
            db.query(MatchRecord)
            .filter(MatchRecord.tournament == tournament)
            .delete()
        )
        db.commit()
        return deleted
