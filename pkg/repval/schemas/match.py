"""Pydantic схемы результатов матчей и статистики турнира."""

from typing import Dict, List

from pydantic import BaseModel, Field

from repval.models.enums import Scenario, Winner


class MatchResult(BaseModel):
    """Итог одного матча.

    Армия A под управлением player_a, армия B - player_b.
    """

    player_a: str = Field(..., min_length=1, description="Игрок армии A")
    player_b: str = Field(..., min_length=1, description="Игрок армии B")
    winner: Winner = Field(..., description="Победившая армия или ничья")
    kills_a: int = Field(..., ge=0, description="Убито армией A")
    kills_b: int = Field(..., ge=0, description="Убито армией B")
    steps: int = Field(..., ge=0, description="Длина матча в шагах")
    seed: int = Field(..., description="Зерно матча")
    scenario: Scenario = Field(Scenario.BATTLE, description="Сценарий")

    model_config = {"from_attributes": True}


class PlayerStats(BaseModel):
    """Строка таблицы рейтинга."""

    name: str = Field(..., description="Имя игрока")
    elo: float = Field(..., description="Рейтинг Эло")
    kills: int = Field(0, ge=0, description="Убито противников")
    deaths: int = Field(0, ge=0, description="Потеряно своих")
    kd_ratio: float = Field(0.0, ge=0.0, description="kills / max(deaths, 1)")
    wins: int = Field(0, ge=0, description="Победы")
    losses: int = Field(0, ge=0, description="Поражения")
    draws: int = Field(0, ge=0, description="Ничьи")
    games: int = Field(0, ge=0, description="Сыграно партий")
    winrate: float = Field(0.0, ge=0.0, le=1.0, description="wins / games")


class StatsReport(BaseModel):
    """Статистика турнира: игроки по убыванию рейтинга и матрица побед.

    pairwise[a][b] - число побед a над b.
    """

    players: List[PlayerStats] = Field(default_factory=list)
    pairwise: Dict[str, Dict[str, int]] = Field(default_factory=dict)

    def get(self, name: str) -> PlayerStats:
        """Статистика игрока по имени.

        Raises:
            KeyError: Игрока нет в отчёте
        """
        for player in self.players:
            if player.name == name:
                return player
        raise KeyError(name)

    @property
    def active(self) -> List[PlayerStats]:
        """Игроки, сыгравшие хотя бы одну партию."""
        return [player for player in self.players if player.games > 0]
