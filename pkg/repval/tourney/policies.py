"""Игроки турнира и их политики."""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from repval.env.actions import DIRECTIONS, N_ACTIONS, STAY, attack, move
from repval.env.observation import observation_size, observe_all
from repval.env.world import GridWorld
from repval.exceptions import CheckpointError
from repval.learn import AnyLearner, QLearner
from repval.learn.checkpoint import load_learner
from repval.models.enums import AlgoVariant, BuiltinPolicy, Team
from repval.schemas.config import GridConfig, PlayerSpec


class Policy:
    """Политика армии: действия всех её живых агентов на шаге."""

    def actions(
        self,
        world: GridWorld,
        team: Team,
        rng: np.random.Generator
    ) -> Dict[int, int]:
        raise NotImplementedError

    def check(self, config: GridConfig) -> None:
        """Проверка совместимости с миром."""


class LearnerPolicy(Policy):
    """Обученная политика без исследования и без обучения.

    Q-обучаемые действуют жадно, актор-критики сэмплируют pi_theta
    генератором матча.
    """

    def __init__(self, learner: AnyLearner):
        self.learner = learner
        self.explore = not isinstance(learner, QLearner)

    def actions(self, world, team, rng):
        observations = observe_all(world)
        return {
            aid: self.learner.act(
                observations[aid],
                world,
                aid,
                self.explore,
                observations,
                rng,
            )
            for aid in world.living_ids(team)
        }

    def check(self, config: GridConfig) -> None:
        expected = observation_size(config.view_radius)
        if self.learner.s_dim != expected:
            raise CheckpointError(
                f"{self.learner.variant.value}: наблюдение длины "
                f"{self.learner.s_dim}, а мир даёт {expected}"
            )


class RandomPolicy(Policy):
    """Равномерно по 17 действиям."""

    def actions(self, world, team, rng):
        return {
            aid: int(rng.integers(N_ACTIONS))
            for aid in world.living_ids(team)
        }


class StayPolicy(Policy):
    def actions(self, world, team, rng):
        return {aid: STAY for aid in world.living_ids(team)}


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


class AggressorPolicy(Policy):
    """Атака соседнего врага, иначе шаг к ближайшему врагу."""

    def actions(self, world, team, rng):
        enemies = [world.agents[k] for k in world.living_ids(team.opponent)]
        chosen = {}
        for aid in world.living_ids(team):
            chosen[aid] = self._choose(world, world.agents[aid], enemies)
        return chosen

    @staticmethod
    def _choose(world: GridWorld, agent, enemies) -> int:
        x, y = agent.pos
        for direction, (dx, dy) in enumerate(DIRECTIONS):
            target = world.agent_at(x + dx, y + dy)
            if target is not None and target.team is not agent.team:
                return attack(direction)
        if not enemies:
            return STAY
        nearest = min(
            enemies,
            key=lambda e: (
                max(abs(e.pos[0] - x), abs(e.pos[1] - y)),
                e.id,
            ),
        )
        step = (_sign(nearest.pos[0] - x), _sign(nearest.pos[1] - y))
        return move(DIRECTIONS.index(step))


BUILTIN_POLICIES = {
    BuiltinPolicy.RANDOM: RandomPolicy,
    BuiltinPolicy.STAY: StayPolicy,
    BuiltinPolicy.AGGRESSOR: AggressorPolicy,
}


@dataclass(eq=False)
class Player:
    """Игрок турнира.

    Атрибуты:
        name: Уникальное имя (например RFQ_A)
        policy: Загруженная политика
        variant: Вариант алгоритма обученного игрока
        builtin: Скриптовая политика
        checkpoint: Путь к чекпоинту без расширения
    """

    name: str
    policy: Policy
    variant: Optional[AlgoVariant] = None
    builtin: Optional[BuiltinPolicy] = None
    checkpoint: Optional[str] = None

    @property
    def family(self) -> str:
        """Семейство для сводных таблиц: вариант или имя скрипта."""
        if self.variant is not None:
            return self.variant.value
        return self.builtin.value if self.builtin else self.name


def load_player(spec: PlayerSpec) -> Player:
    """Игрок по описанию из конфигурации.

    Raises:
        CheckpointError: Чекпоинт не загружается (сообщение называет
            игрока)
    """
    if spec.builtin is not None:
        return Player(
            spec.name,
            BUILTIN_POLICIES[spec.builtin](),
            builtin=spec.builtin,
        )
    try:
        learner, _ = load_learner(spec.checkpoint)
    except CheckpointError as error:
        raise CheckpointError(f"Игрок {spec.name}: {error}") from error
    return Player(
        spec.name,
        LearnerPolicy(learner),
        variant=learner.variant,
        checkpoint=str(spec.checkpoint),
    )


def learner_player(name: str, learner: AnyLearner) -> Player:
    """Игрок из обучаемого в памяти."""
    return Player(name, LearnerPolicy(learner), variant=learner.variant)
