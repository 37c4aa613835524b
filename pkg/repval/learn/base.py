"""Общая часть обучаемых: входы по варианту и выбор действия."""

from typing import Mapping, Optional

import numpy as np

from repval.aggregate import NormalizedInputs
from repval.env.observation import Observation
from repval.env.world import GridWorld
from repval.graph import AttentionParams
from repval.learn.context import (
    NeighborContext,
    build_context,
    inputs_from_context,
)
from repval.models.enums import AlgoVariant, NeighborMode
from repval.schemas.config import AlgoConfig


class Learner:
    """База для QLearner и ACLearner.

    Одна сеть (и одни параметры внимания) на всех однородных агентов.

    Атрибуты:
        variant: Вариант алгоритма, задаёт режим соседей
        config: Гиперпараметры
        s_dim: Длина вектора наблюдения
        n_actions: Размер пространства действий
        rng: Генератор исследования
        attention: Параметры внимания (только RFQ/RFAC)
    """

    def __init__(
        self,
        variant: AlgoVariant,
        config: AlgoConfig,
        s_dim: int,
        n_actions: int,
        rng: np.random.Generator,
        attention: Optional[AttentionParams] = None
    ):
        self.variant = variant
        self.config = config
        self.s_dim = s_dim
        self.n_actions = n_actions
        self.rng = rng
        self.attention = attention

    @property
    def neighbor_mode(self) -> NeighborMode:
        return self.variant.neighbor_mode

    @property
    def keeps_context(self) -> bool:
        """Хранить ли сырой контекст для пересчёта весов внимания."""
        return self.neighbor_mode is NeighborMode.ATTENTION

    def context_for(
        self,
        world: GridWorld,
        agent_id: int,
        observations: Optional[Mapping[int, Observation]] = None
    ) -> NeighborContext:
        """Контекст агента; для IL/AC соседство всегда пустое."""
        radius = (
            0 if self.neighbor_mode is NeighborMode.NONE
            else world.config.neighbor_radius
        )
        return build_context(world, agent_id, radius, observations)

    def inputs_for(self, context: NeighborContext) -> NormalizedInputs:
        return inputs_from_context(
            context,
            self.neighbor_mode,
            self.attention,
        )

    def action_probs(self, inputs: NormalizedInputs) -> np.ndarray:
        """Распределение исследования над действиями."""
        raise NotImplementedError

    def greedy(self, inputs: NormalizedInputs) -> int:
        """Мода распределения."""
        return int(np.argmax(self.action_probs(inputs)))

    def select(
        self,
        inputs: NormalizedInputs,
        explore: bool,
        rng: Optional[np.random.Generator] = None
    ) -> int:
        """Выбор по распределению при explore, иначе жадный."""
        if not explore:
            return self.greedy(inputs)
        probs = self.action_probs(inputs)
        rng = rng if rng is not None else self.rng
        return int(rng.choice(self.n_actions, p=probs))

    def act(
        self,
        obs: Observation,
        world: GridWorld,
        agent_id: int,
        explore: bool,
        observations: Optional[Mapping[int, Observation]] = None,
        rng: Optional[np.random.Generator] = None
    ) -> int:
        """Действие живого агента.

        Raises:
            ContractViolation: Агент мёртв или неизвестен
        """
        observations = dict(observations or {})
        observations[agent_id] = obs
        context = self.context_for(world, agent_id, observations)
        return self.select(self.inputs_for(context), explore, rng)
