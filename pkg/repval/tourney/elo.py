"""Рейтинг Эло."""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from repval.exceptions import ContractViolation
from repval.models.enums import Outcome, Winner

SCORES = {Outcome.A_WINS: 1.0, Outcome.B_WINS: 0.0, Outcome.DRAW: 0.5}


def outcome_of(winner: Winner) -> Outcome:
    """Исход для рейтинга по победившей армии."""
    return {
        Winner.A: Outcome.A_WINS,
        Winner.B: Outcome.B_WINS,
        Winner.DRAW: Outcome.DRAW,
    }[winner]


def expected_score(r_a: float, r_b: float) -> float:
    """E_a = 1 / (1 + 10^((r_b - r_a) / 400))."""
    return 1.0 / (1.0 + 10.0 ** ((r_b - r_a) / 400.0))


def elo_update(
    r_a: float,
    r_b: float,
    outcome: Outcome,
    k: float
) -> Tuple[float, float]:
    """Обновление пары рейтингов после партии.

    Изменение вычисляется один раз и прибавляется к A и вычитается из B,
    поэтому сумма рейтингов сохраняется точно.

    Raises:
        ContractViolation: Нечисловые рейтинги или k <= 0
    """
    if not (math.isfinite(r_a) and math.isfinite(r_b)):
        raise ContractViolation(f"Нечисловые рейтинги: {r_a}, {r_b}")
    if k <= 0:
        raise ContractViolation(f"K должен быть > 0: {k}")
    delta = k * (SCORES[outcome] - expected_score(r_a, r_b))
    return r_a + delta, r_b - delta


@dataclass
class EloTable:
    """Рейтинги игроков турнира.

    Атрибуты:
        ratings: Рейтинг по имени игрока
        k_factor: Коэффициент K
        initial_rating: Стартовый рейтинг
    """

    k_factor: float = 32.0
    initial_rating: float = 1200.0
    ratings: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        names: Iterable[str],
        k_factor: float = 32.0,
        initial_rating: float = 1200.0
    ) -> "EloTable":
        """Таблица со стартовым рейтингом у каждого игрока."""
        return cls(
            k_factor,
            initial_rating,
            {name: initial_rating for name in names},
        )

    def rating(self, name: str) -> float:
        return self.ratings.get(name, self.initial_rating)

    def apply(self, player_a: str, player_b: str, outcome: Outcome) -> None:
        """Учёт партии player_a (армия A) против player_b (армия B).

        Партия игрока с самим собой рейтинг не меняет.
        """
        if player_a == player_b:
            self.ratings.setdefault(player_a, self.initial_rating)
            return
        self.ratings[player_a], self.ratings[player_b] = elo_update(
            self.rating(player_a),
            self.rating(player_b),
            outcome,
            self.k_factor,
        )

    @property
    def total(self) -> float:
        """Сумма рейтингов."""
        return sum(self.ratings.values())
