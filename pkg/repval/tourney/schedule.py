"""Расписание турнира: случайные пары игроков."""

from typing import List, NamedTuple, Sequence

import numpy as np

from repval.exceptions import ContractViolation

SEED_BOUND = 2 ** 31 - 1


class Fixture(NamedTuple):
    """Партия расписания: игрок армии A, игрок армии B, зерно."""

    player_a: str
    player_b: str
    seed: int


def schedule(players: Sequence[str], n_games: int, seed: int) -> List[Fixture]:
    """n_games случайных пар различных игроков.

    Сторона A достаётся первому выбранному игроку.

    Raises:
        ContractViolation: Меньше двух игроков или n_games < 0
    """
    if len(players) < 2:
        raise ContractViolation(
            f"Для турнира нужно минимум два игрока, получено {len(players)}"
        )
    if n_games < 0:
        raise ContractViolation(f"Отрицательное число партий: {n_games}")
    rng = np.random.default_rng(seed)
    fixtures = []
    for _ in range(n_games):
        a, b = rng.choice(len(players), size=2, replace=False)
        fixtures.append(Fixture(
            players[int(a)],
            players[int(b)],
            int(rng.integers(SEED_BOUND)),
        ))
    return fixtures
