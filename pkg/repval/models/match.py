"""Модель записи журнала матчей."""

from sqlalchemy import Column, Integer, String
from sqlalchemy import Enum as SQLEnum

from repval.database import Base
from repval.models.enums import Scenario, Winner


class MatchRecord(Base):
    """Сыгранный матч турнира.

    Атрибуты:
        id: Автоинкрементный идентификатор
        tournament: Метка турнира
        game_index: Номер партии в расписании
        scenario: Сценарий
        player_a, player_b: Игроки армий A и B
        winner: Победившая армия или ничья
        kills_a, kills_b: Убийства армий
        steps: Длина матча
        seed: Зерно матча
    """

    __tablename__ = "matches"

    id = Column(Integer, primary_key=True, autoincrement=True)
    tournament = Column(String(64), nullable=False, index=True)
    game_index = Column(Integer, nullable=False)
    scenario = Column(SQLEnum(Scenario), nullable=False)
    player_a = Column(String(64), nullable=False, index=True)
    player_b = Column(String(64), nullable=False, index=True)
    winner = Column(SQLEnum(Winner), nullable=False)
    kills_a = Column(Integer, nullable=False, default=0)
    kills_b = Column(Integer, nullable=False, default=0)
    steps = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)

    def __repr__(self):
        """Строковое представление матча."""
        return (
            f"<MatchRecord(tournament='{self.tournament}', "
            f"game={self.game_index}, {self.player_a} vs "
            f"{self.player_b}, winner='{self.winner}')>"
        )
