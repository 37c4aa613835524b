"""Перечисления предметной области."""

from enum import Enum


class Team(str, Enum):
    """Армии."""

    A = "A"
    B = "B"

    @property
    def opponent(self) -> "Team":
        """Противоположная армия."""
        return Team.B if self is Team.A else Team.A


class Winner(str, Enum):
    """Исход эпизода или матча."""

    A = "A"
    B = "B"
    DRAW = "Draw"


class Scenario(str, Enum):
    """Сценарии начальной расстановки."""

    BATTLE = "battle"
    WILD_WAR = "wildwar"


class NeighborMode(str, Enum):
    """Способ учёта соседей."""

    NONE = "none"
    UNIFORM = "uniform"
    ATTENTION = "attention"


class AlgoVariant(str, Enum):
    """Шесть обучаемых алгоритмов."""

    IL = "IL"
    MFQ = "MFQ"
    RFQ = "RFQ"
    AC = "AC"
    MFAC = "MFAC"
    RFAC = "RFAC"

    @property
    def neighbor_mode(self) -> NeighborMode:
        """Режим соседей, фиксированный для варианта."""
        if self in (AlgoVariant.IL, AlgoVariant.AC):
            return NeighborMode.NONE
        if self in (AlgoVariant.MFQ, AlgoVariant.MFAC):
            return NeighborMode.UNIFORM
        return NeighborMode.ATTENTION

    @property
    def is_q_learner(self) -> bool:
        """True для внеполитичных Q-алгоритмов (IL, MFQ, RFQ)."""
        return self in (AlgoVariant.IL, AlgoVariant.MFQ, AlgoVariant.RFQ)


class BuiltinPolicy(str, Enum):
    """Скриптовые игроки для турниров и проверок."""

    RANDOM = "random"
    STAY = "stay"
    AGGRESSOR = "aggressor"


class Outcome(str, Enum):
    """Результат партии для рейтинга Эло."""

    A_WINS = "AWins"
    B_WINS = "BWins"
    DRAW = "Draw"
