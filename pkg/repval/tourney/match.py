"""Проведение матчей между игроками."""

from collections import Counter
from typing import Callable, Optional

import numpy as np

from repval.env.world import GridWorld, new_scenario, step
from repval.learn.train import episode_seed
from repval.models.enums import Scenario, Team, Winner
from repval.schemas.config import GridConfig
from repval.schemas.match import MatchResult
from repval.tourney.policies import Player


def play_match(
    player_a: Player,
    player_b: Player,
    scenario: Scenario,
    config: GridConfig,
    seed: int,
    on_frame: Optional[Callable[[GridWorld], None]] = None
) -> MatchResult:
    """Матч до конца эпизода: армия A у player_a, армия B у player_b.

    Мир и генераторы сторон выводятся из seed, поэтому матч полностью
    воспроизводим.

    Args:
        player_a: Игрок армии A
        player_b: Игрок армии B
        scenario: Сценарий расстановки
        config: Параметры мира
        seed: Зерно матча
        on_frame: Вызывается для начального мира и после каждого шага

    Raises:
        CheckpointError: Политика несовместима с миром
    """
    player_a.policy.check(config)
    player_b.policy.check(config)
    world = new_scenario(config, scenario, seed)
    rng_a = np.random.default_rng([seed, 0])
    rng_b = np.random.default_rng([seed, 1])
    if on_frame:
        on_frame(world)

    winner = None
    while not world.finished:
        actions = player_a.policy.actions(world, Team.A, rng_a)
        actions.update(player_b.policy.actions(world, Team.B, rng_b))
        outcome = step(world, actions)
        winner = outcome.winner
        if on_frame:
            on_frame(world)

    n = config.agents_per_team
    return MatchResult(
        player_a=player_a.name,
        player_b=player_b.name,
        winner=winner,
        kills_a=n - world.alive_count(Team.B),
        kills_b=n - world.alive_count(Team.A),
        steps=world.step_count,
        seed=seed,
        scenario=scenario,
    )


def evaluate(
    player_a: Player,
    player_b: Player,
    n_games: int,
    scenario: Scenario,
    config: GridConfig,
    seed: int
) -> Counter:
    """Счёт серии матчей player_a (армия A) против player_b.

    Returns:
        Число исходов по Winner
    """
    counts = Counter({winner: 0 for winner in Winner})
    for game in range(n_games):
        result = play_match(
            player_a,
            player_b,
            scenario,
            config,
            episode_seed(seed, game),
        )
        counts[result.winner] += 1
    return counts
