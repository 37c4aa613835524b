"""Локальные наблюдения агентов."""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from repval.env.actions import N_ACTIONS
from repval.env.world import GridWorld

N_CHANNELS = 3
ALLY, ENEMY, HP = range(N_CHANNELS)


@dataclass(frozen=True, eq=False)
class Observation:
    """Наблюдение агента.

    Атрибуты:
        self_features: Нормированная позиция, hp/hp_max, one-hot
            последнего действия
        local_view: Окно (2r+1)x(2r+1)x3 (союзник, враг, здоровье),
            развёрнутое в вектор
    """

    self_features: np.ndarray
    local_view: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        """Полный вектор наблюдения."""
        return np.concatenate([self.self_features, self.local_view])


def observation_size(view_radius: int) -> int:
    """Длина вектора наблюдения для радиуса обзора."""
    side = 2 * view_radius + 1
    return 3 + N_ACTIONS + side * side * N_CHANNELS


def observe(world: GridWorld, agent_id: int) -> Observation:
    """Наблюдение живого агента.

    Клетки вне карты читаются как нули во всех каналах.

    Raises:
        ContractViolation: Агент мёртв или неизвестен
    """
    agent = world.get_living(agent_id)
    config = world.config
    radius = config.view_radius
    side = 2 * radius + 1

    x, y = agent.pos
    self_features = np.zeros(3 + N_ACTIONS)
    self_features[0] = x / (config.width - 1)
    self_features[1] = y / (config.height - 1)
    self_features[2] = agent.hp / config.hp_max
    self_features[3 + agent.last_action] = 1.0

    view = np.zeros((side, side, N_CHANNELS))
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            other = world.agent_at(x + dx, y + dy)
            if other is None:
                continue
            cell = view[dy + radius, dx + radius]
            cell[ALLY if other.team is agent.team else ENEMY] = 1.0
            cell[HP] = other.hp / config.hp_max
    return Observation(self_features, view.reshape(-1))


def observe_all(world: GridWorld) -> Dict[int, Observation]:
    """Наблюдения всех живых агентов."""
    return {
        agent_id: observe(world, agent_id)
        for agent_id in world.living_ids()
    }
