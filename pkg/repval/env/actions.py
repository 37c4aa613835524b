"""Набор действий агента.

Индексы фиксированы: 0 - стоять, 1-8 - шаг, 9-16 - атака соседней клетки.
Направления идут по часовой стрелке с севера (ось y направлена вниз).
"""

from enum import Enum
from typing import Tuple

import numpy as np

from repval.exceptions import ContractViolation

DIRECTIONS: Tuple[Tuple[int, int], ...] = (
    (0, -1),   # N
    (1, -1),   # NE
    (1, 0),    # E
    (1, 1),    # SE
    (0, 1),    # S
    (-1, 1),   # SW
    (-1, 0),   # W
    (-1, -1),  # NW
)

STAY = 0
N_DIRECTIONS = len(DIRECTIONS)
N_ACTIONS = 1 + 2 * N_DIRECTIONS


class ActionKind(str, Enum):
    """Вид действия."""

    STAY = "stay"
    MOVE = "move"
    ATTACK = "attack"


def move(direction: int) -> int:
    """Индекс шага в направлении direction (0..7)."""
    _check_direction(direction)
    return 1 + direction


def attack(direction: int) -> int:
    """Индекс атаки в направлении direction (0..7)."""
    _check_direction(direction)
    return 1 + N_DIRECTIONS + direction


def action_kind(action: int) -> ActionKind:
    """Вид действия по индексу."""
    check_action(action)
    if action == STAY:
        return ActionKind.STAY
    if action <= N_DIRECTIONS:
        return ActionKind.MOVE
    return ActionKind.ATTACK


def action_delta(action: int) -> Tuple[int, int]:
    """Смещение (dx, dy) шага или атаки; (0, 0) для Stay."""
    kind = action_kind(action)
    if kind is ActionKind.STAY:
        return (0, 0)
    if kind is ActionKind.MOVE:
        return DIRECTIONS[action - 1]
    return DIRECTIONS[action - 1 - N_DIRECTIONS]


def one_hot(action: int) -> np.ndarray:
    """One-hot вектор длины N_ACTIONS."""
    check_action(action)
    vector = np.zeros(N_ACTIONS)
    vector[action] = 1.0
    return vector


def check_action(action: int) -> None:
    """Проверка индекса действия."""
    if not 0 <= int(action) < N_ACTIONS:
        raise ContractViolation(f"Недопустимый индекс действия: {action}")


def _check_direction(direction: int) -> None:
    if not 0 <= direction < N_DIRECTIONS:
        raise ContractViolation(f"Недопустимое направление: {direction}")
