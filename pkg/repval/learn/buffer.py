"""Переходы и буфер воспроизведения."""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from repval.aggregate import NormalizedInputs
from repval.env.actions import check_action
from repval.exceptions import ContractViolation, NumericalError
from repval.learn.context import NeighborContext


@dataclass(frozen=True, eq=False)
class Transition:
    """Один переход агента.

    Атрибуты:
        obs, next_obs: Векторы наблюдений s^j
        action: Индекс a^j
        reward: r^j
        nbr_inputs, next_nbr_inputs: Входы сети в t и t+1
        done: Конец эпизода или гибель агента
        context, next_context: Сырые контексты для пересчёта весов
            внимания (только для вариантов с вниманием)
    """

    obs: np.ndarray
    action: int
    reward: float
    next_obs: np.ndarray
    nbr_inputs: NormalizedInputs
    next_nbr_inputs: NormalizedInputs
    done: bool
    context: Optional[NeighborContext] = None
    next_context: Optional[NeighborContext] = None

    def __post_init__(self):
        check_action(self.action)
        if not np.isfinite(self.reward):
            raise NumericalError(f"Нечисловая награда: {self.reward}")


class ReplayBuffer:
    """Кольцевой буфер с собственным генератором выборок."""

    def __init__(self, capacity: int, rng: np.random.Generator):
        if capacity < 1:
            raise ContractViolation(f"Ёмкость буфера < 1: {capacity}")
        self.capacity = capacity
        self.rng = rng
        self._items: List[Transition] = []
        self._next = 0

    def __len__(self) -> int:
        return len(self._items)

    def add(self, transition: Transition) -> None:
        """Добавление с вытеснением самого старого перехода."""
        if len(self._items) < self.capacity:
            self._items.append(transition)
        else:
            self._items[self._next] = transition
        self._next = (self._next + 1) % self.capacity

    def sample(self, batch_size: int) -> List[Transition]:
        """Равномерная выборка без повторов внутри батча."""
        if not self._items:
            raise ContractViolation("Выборка из пустого буфера")
        size = min(batch_size, len(self._items))
        indices = self.rng.choice(len(self._items), size=size, replace=False)
        return [self._items[int(i)] for i in indices]
