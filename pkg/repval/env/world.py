"""Сеточный мир сражения двух армий."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from repval.env.actions import (
    STAY,
    ActionKind,
    action_delta,
    action_kind,
    check_action,
)
from repval.exceptions import ConfigurationError, ContractViolation
from repval.models.enums import Scenario, Team, Winner
from repval.schemas.config import GridConfig

logger = logging.getLogger(__name__)

# Награды среды сражения
MOVE_REWARD = -0.005
ATTACK_HIT_REWARD = 0.2
KILL_REWARD = 5.0
ATTACK_MISS_REWARD = -0.1
ATTACKED_REWARD = -0.1

EMPTY = -1


@dataclass
class AgentState:
    """Состояние агента.

    Атрибуты:
        id: Уникальный индекс
        team: Армия
        pos: Клетка (x, y)
        hp: Здоровье
        last_action: Последнее поданное действие
    """

    id: int
    team: Team
    pos: Tuple[int, int]
    hp: int
    last_action: int = STAY

    @property
    def alive(self) -> bool:
        """Агент жив, пока hp > 0."""
        return self.hp > 0


@dataclass
class StepOutcome:
    """Результат одного шага среды."""

    rewards: Dict[int, float]
    kills: List[Tuple[int, int]]
    terminal: bool
    winner: Optional[Winner]


@dataclass(eq=False)
class GridWorld:
    """Полное состояние симуляции.

    Экземпляр не потокобезопасен; вся случайность идёт из собственного
    генератора, поэтому разные миры можно гонять параллельно.
    """

    config: GridConfig
    scenario: Scenario
    seed: int
    agents: List[AgentState]
    grid: np.ndarray
    rng: np.random.Generator
    step_count: int = 0
    finished: bool = field(default=False)

    @property
    def width(self) -> int:
        return self.config.width

    @property
    def height(self) -> int:
        return self.config.height

    def in_bounds(self, x: int, y: int) -> bool:
        """Клетка внутри карты."""
        return 0 <= x < self.width and 0 <= y < self.height

    def agent_at(self, x: int, y: int) -> Optional[AgentState]:
        """Живой агент в клетке или None."""
        if not self.in_bounds(x, y):
            return None
        agent_id = int(self.grid[y, x])
        if agent_id == EMPTY:
            return None
        return self.agents[agent_id]

    def living_ids(self, team: Optional[Team] = None) -> List[int]:
        """Идентификаторы живых агентов по возрастанию."""
        return [
            agent.id
            for agent in self.agents
            if agent.alive and (team is None or agent.team is team)
        ]

    def alive_count(self, team: Team) -> int:
        """Число живых агентов армии."""
        return len(self.living_ids(team))

    def get_agent(self, agent_id: int) -> AgentState:
        """Агент по идентификатору.

        Raises:
            ContractViolation: Неизвестный идентификатор
        """
        if not 0 <= agent_id < len(self.agents):
            raise ContractViolation(f"Неизвестный агент: {agent_id}")
        return self.agents[agent_id]

    def get_living(self, agent_id: int) -> AgentState:
        """Живой агент по идентификатору.

        Raises:
            ContractViolation: Агент неизвестен или мёртв
        """
        agent = self.get_agent(agent_id)
        if not agent.alive:
            raise ContractViolation(f"Агент {agent_id} мёртв")
        return agent

    def snapshot(self) -> Tuple:
        """Неизменяемый снимок состояния для сравнения траекторий."""
        return (
            self.step_count,
            tuple(
                (a.id, a.team.value, a.pos, a.hp, a.last_action)
                for a in self.agents
            ),
        )


def new_scenario(
    config: GridConfig,
    scenario: Scenario,
    seed: int
) -> GridWorld:
    """Создание мира для сценария.

    Battle: армия A в левой четверти карты, B в правой, заполнение по
    строкам начиная с вертикального центра. WildWar: все агенты в
    случайных различных клетках.

    Args:
        config: Параметры мира
        scenario: Сценарий расстановки
        seed: Зерно генератора мира

    Returns:
        Новый мир на шаге 0

    Raises:
        ConfigurationError: Армии не помещаются в отведённую область
    """
    n = config.agents_per_team
    rng = np.random.default_rng(seed)
    if scenario is Scenario.BATTLE:
        positions = _battle_positions(config)
    else:
        cells = rng.choice(config.width * config.height, 2 * n, replace=False)
        positions = [
            (int(c) % config.width, int(c) // config.width) for c in cells
        ]

    grid = np.full((config.height, config.width), EMPTY, dtype=np.int64)
    agents = []
    for agent_id, pos in enumerate(positions):
        team = Team.A if agent_id < n else Team.B
        agents.append(AgentState(agent_id, team, pos, config.hp_max))
        grid[pos[1], pos[0]] = agent_id

    logger.debug(
        "Новый мир %s: %dx%d, %d агентов, seed=%d",
        scenario.value,
        config.width,
        config.height,
        2 * n,
        seed,
    )
    return GridWorld(config, scenario, seed, agents, grid, rng)


def _battle_positions(config: GridConfig) -> List[Tuple[int, int]]:
    n = config.agents_per_team
    quarter = config.width // 4
    if quarter * config.height < n:
        raise ConfigurationError(
            f"agents_per_team={n}: не помещается в четверть карты "
            f"{quarter}x{config.height}"
        )
    rows = -(-n // quarter)
    top = (config.height - rows) // 2
    left = [(i % quarter, top + i // quarter) for i in range(n)]
    offset = config.width - quarter
    right = [(offset + x, y) for x, y in left]
    return left + right


def step(world: GridWorld, actions: Mapping[int, int]) -> StepOutcome:
    """Один шаг симуляции.

    Порядок: атаки одновременно по позициям до шага, затем снятие
    здоровья и гибель, затем шаги в случайном порядке. Заблокированный
    шаг становится Stay, но штраф за шаг сохраняется.

    Args:
        world: Мир (изменяется на месте)
        actions: Действие для каждого живого агента

    Returns:
        Награды, убийства и признак окончания

    Raises:
        ContractViolation: Действие мёртвого/неизвестного агента,
            пропущенный живой агент или шаг после окончания эпизода
    """
    if world.finished:
        raise ContractViolation("Эпизод уже завершён")
    for agent_id, action in actions.items():
        world.get_living(agent_id)
        check_action(action)
    missing = set(world.living_ids()) - set(actions)
    if missing:
        raise ContractViolation(
            f"Нет действий для живых агентов: {sorted(missing)}"
        )

    order = sorted(actions)
    rewards = {agent_id: 0.0 for agent_id in order}
    hits: Dict[int, List[int]] = {}
    movers = []

    for agent_id in order:
        action = actions[agent_id]
        kind = action_kind(action)
        if kind is ActionKind.MOVE:
            rewards[agent_id] += MOVE_REWARD
            movers.append(agent_id)
        elif kind is ActionKind.ATTACK:
            agent = world.agents[agent_id]
            dx, dy = action_delta(action)
            target = world.agent_at(agent.pos[0] + dx, agent.pos[1] + dy)
            if target is not None and target.team is not agent.team:
                rewards[agent_id] += ATTACK_HIT_REWARD
                hits.setdefault(target.id, []).append(agent_id)
            else:
                rewards[agent_id] += ATTACK_MISS_REWARD

    kills = []
    for victim_id in sorted(hits):
        attackers = hits[victim_id]
        victim = world.agents[victim_id]
        for _ in attackers:
            rewards[victim_id] += ATTACKED_REWARD
        victim.hp = max(
            0,
            victim.hp - world.config.attack_damage * len(attackers)
        )
        if not victim.alive:
            world.grid[victim.pos[1], victim.pos[0]] = EMPTY
            share = KILL_REWARD / len(attackers)
            for attacker_id in attackers:
                rewards[attacker_id] += share
                kills.append((attacker_id, victim_id))

    movers = [agent_id for agent_id in movers if world.agents[agent_id].alive]
    for index in world.rng.permutation(len(movers)):
        agent = world.agents[movers[int(index)]]
        dx, dy = action_delta(actions[agent.id])
        x, y = agent.pos[0] + dx, agent.pos[1] + dy
        if world.in_bounds(x, y) and world.grid[y, x] == EMPTY:
            world.grid[agent.pos[1], agent.pos[0]] = EMPTY
            world.grid[y, x] = agent.id
            agent.pos = (x, y)

    for agent_id in order:
        world.agents[agent_id].last_action = int(actions[agent_id])
    world.step_count += 1

    terminal, winner = is_terminal(world)
    world.finished = terminal
    return StepOutcome(rewards, kills, terminal, winner)


def is_terminal(world: GridWorld) -> Tuple[bool, Optional[Winner]]:
    """Проверка окончания эпизода.

    Returns:
        (True, победитель) если одна армия уничтожена или достигнут
        предел шагов; (False, None) иначе
    """
    alive_a = world.alive_count(Team.A)
    alive_b = world.alive_count(Team.B)
    if alive_a == 0 or alive_b == 0 or (
        world.step_count >= world.config.max_steps
    ):
        if alive_a > alive_b:
            return True, Winner.A
        if alive_b > alive_a:
            return True, Winner.B
        return True, Winner.DRAW
    return False, None
