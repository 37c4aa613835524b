"""Конфигурация pytest для тестирования repval."""
from typing import Sequence, Tuple

import numpy as np
import pytest

from repval.database import create_session_factory
from repval.env.world import EMPTY, AgentState, GridWorld
from repval.models.enums import Scenario, Team
from repval.schemas.config import AlgoConfig, GridConfig


@pytest.fixture
def tiny_grid():
    """Фикстура малого мира 8x8 с двумя агентами в армии."""
    return GridConfig(
        width=8,
        height=8,
        agents_per_team=2,
        max_steps=12,
        view_radius=1,
        neighbor_radius=3,
    )


@pytest.fixture
def tiny_algo():
    """Фикстура гиперпараметров с маленькими сетями."""
    return AlgoConfig(
        hidden=[8],
        embed_dim=4,
        batch_size=8,
        buffer_capacity=256,
        update_every=2,
    )


@pytest.fixture
def make_world():
    """Фабрика мира с заданными позициями армий.

    Агенты армии A получают идентификаторы первыми.
    """
    def factory(
        positions_a: Sequence[Tuple[int, int]],
        positions_b: Sequence[Tuple[int, int]],
        config: GridConfig = None,
        hp: int = None,
        seed: int = 0
    ) -> GridWorld:
        config = config or GridConfig(width=6, height=6, agents_per_team=1)
        grid = np.full((config.height, config.width), EMPTY, dtype=np.int64)
        agents = []
        placed = [(Team.A, p) for p in positions_a]
        placed += [(Team.B, p) for p in positions_b]
        for agent_id, (team, pos) in enumerate(placed):
            agents.append(AgentState(
                agent_id,
                team,
                tuple(pos),
                config.hp_max if hp is None else hp,
            ))
            grid[pos[1], pos[0]] = agent_id
        return GridWorld(
            config,
            Scenario.BATTLE,
            seed,
            agents,
            grid,
            np.random.default_rng(seed),
        )

    return factory


@pytest.fixture(scope="function")
def db_session():
    """Фикстура для создания сессии базы данных в памяти."""
    session_factory = create_session_factory("sqlite://")
    db = session_factory()
    try:
        yield db
    finally:
        db.close()
