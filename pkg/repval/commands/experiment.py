"""Команда experiment: настольные прогоны обучения и турниров.

Обучает все шесть вариантов на нескольких зёрнах и проверяет три
утверждения: доходность RFQ и RFAC растёт, обученный RFAC обыгрывает
случайного и необученного соперника, RFAC выше IL по Эло.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from repval.commands.verify import CheckResult
from repval.env.observation import observation_size
from repval.exceptions import ConfigurationError
from repval.learn import AnyLearner, create_learner
from repval.learn.train import TrainingLog, train
from repval.models.enums import AlgoVariant, BuiltinPolicy, Scenario, Winner
from repval.schemas.config import PlayerSpec, RunConfig
from repval.tourney.match import evaluate
from repval.tourney.policies import learner_player, load_player
from repval.tourney.report import write_csv, write_reports
from repval.tourney.tournament import run_tournament

logger = logging.getLogger(__name__)

LEARNING_WINDOW = 100
RANDOM_WIN_SHARE = 0.9
UNTRAINED_WIN_SHARE = 0.8
MIN_TOURNAMENT_GAMES = 500
COMPARISON_HEADER = (
    "scenario", "family", "rank", "elo", "published_rank", "published_elo"
)

# Лучший игрок каждого семейства в опубликованных турнирах 64 на 64
PUBLISHED_ELO: Dict[Scenario, Dict[str, float]] = {
    Scenario.BATTLE: {
        "RFAC": 1720.91,
        "AC": 1650.09,
        "MFAC": 1640.15,
        "MFQ": 1234.99,
        "RFQ": 1159.45,
        "IL": 1148.05,
    },
    Scenario.WILD_WAR: {
        "RFAC": 2953.19,
        "RFQ": 1822.49,
        "AC": 1619.43,
        "MFAC": 1446.66,
        "IL": 638.80,
        "MFQ": 132.83,
    },
}


@dataclass
class TrainedRun:
    """Обученный вариант на одном зерне."""

    variant: AlgoVariant
    seed: int
    learner: AnyLearner
    log: TrainingLog


Population = Dict[Tuple[AlgoVariant, int], TrainedRun]


def majority(n: int) -> int:
    """Минимальное большинство из n."""
    return n // 2 + 1


def improved(log: TrainingLog, window: int = LEARNING_WINDOW) -> bool:
    """Средняя доходность последнего окна выше первого.

    Окно сужается до половины журнала; пустой журнал не улучшается.
    """
    n = len(log)
    width = min(window, n // 2)
    if width == 0:
        return False
    return log.mean_return(n - width, n) > log.mean_return(0, width)


def train_population(config: RunConfig, seeds: Sequence[int]) -> Population:
    """Все шесть вариантов, обученные на каждом зерне."""
    s_dim = observation_size(config.env.view_radius)
    runs: Population = {}
    for seed in seeds:
        for variant in AlgoVariant:
            algo = config.algo.model_copy(update={"variant": variant})
            learner = create_learner(variant, s_dim, algo, seed)
            log = train(
                learner,
                config.env,
                config.train.scenario,
                config.train.episodes,
                seed,
            )
            runs[variant, seed] = TrainedRun(variant, seed, learner, log)
            logger.info(
                "%s seed=%d: финальная доходность %.3f",
                variant.value,
                seed,
                log.mean_return(max(0, len(log) - LEARNING_WINDOW), len(log)),
            )
    return runs


def check_learning(
    runs: Population,
    seeds: Sequence[int],
    window: int = LEARNING_WINDOW
) -> List[CheckResult]:
    """Рост доходности RFQ и RFAC в большинстве зёрен."""
    checks = []
    for variant in (AlgoVariant.RFQ, AlgoVariant.RFAC):
        flags = [improved(runs[variant, seed].log, window) for seed in seeds]
        checks.append(CheckResult(
            f"learning[{variant.value}]",
            sum(flags) >= majority(len(seeds)),
            f"рост доходности в {sum(flags)}/{len(seeds)} прогонах",
        ))
    return checks


def _win_check(
    name: str,
    wins: Sequence[int],
    n_games: int,
    share: float
) -> CheckResult:
    need = math.ceil(share * n_games)
    passed = sum(count >= need for count in wins) >= majority(len(wins))
    detail = ", ".join(f"{count}/{n_games}" for count in wins)
    return CheckResult(name, passed, f"побед {detail}, нужно {need}")


def check_trained_beats(
    runs: Population,
    config: RunConfig,
    seeds: Sequence[int],
    n_games: int
) -> List[CheckResult]:
    """Обученный RFAC против случайного и против своей инициализации."""
    s_dim = observation_size(config.env.view_radius)
    algo = config.algo.model_copy(update={"variant": AlgoVariant.RFAC})
    random_player = load_player(
        PlayerSpec(name="random", builtin=BuiltinPolicy.RANDOM)
    )
    checks = []
    for scenario in Scenario:
        vs_random, vs_untrained = [], []
        for seed in seeds:
            trained = learner_player(
                "RFAC_trained", runs[AlgoVariant.RFAC, seed].learner
            )
            untrained = learner_player(
                "RFAC_untrained",
                create_learner(AlgoVariant.RFAC, s_dim, algo, seed),
            )
            vs_random.append(evaluate(
                trained, random_player, n_games, scenario, config.env, seed
            )[Winner.A])
            vs_untrained.append(evaluate(
                trained, untrained, n_games, scenario, config.env, seed
            )[Winner.A])
        checks.append(_win_check(
            f"beats_random[{scenario.value}]",
            vs_random,
            n_games,
            RANDOM_WIN_SHARE,
        ))
        checks.append(_win_check(
            f"beats_untrained[{scenario.value}]",
            vs_untrained,
            n_games,
            UNTRAINED_WIN_SHARE,
        ))
    return checks


def comparison_rows(
    scenario: Scenario,
    family_elo: Dict[str, float]
) -> List[List[str]]:
    """Строки сравнения рангов семейств с опубликованными."""
    published = PUBLISHED_ELO[scenario]
    published_order = sorted(published, key=lambda f: -published[f])
    order = sorted(family_elo, key=lambda f: (-family_elo[f], f))
    return [
        [
            scenario.value,
            family,
            str(rank),
            f"{family_elo[family]:.2f}",
            str(published_order.index(family) + 1),
            f"{published[family]:.2f}",
        ]
        for rank, family in enumerate(order, start=1)
    ]


def check_elo_ordering(
    runs: Population,
    config: RunConfig,
    seeds: Sequence[int],
    out_dir: Path,
    workers: int = 1
) -> List[CheckResult]:
    """RFAC выше IL в турнире шести вариантов в большинстве зёрен.

    Играют модели первого зерна обучения; турниры повторяются для
    каждого зерна расписания. Таблицы турниров и elo_comparison.csv
    пишутся в out_dir.
    """
    tc = config.tournament
    if tc.n_games < MIN_TOURNAMENT_GAMES:
        logger.warning(
            "n_games=%d меньше %d: порядок Эло неустойчив",
            tc.n_games,
            MIN_TOURNAMENT_GAMES,
        )
    label = config.train.run_label
    players = [
        learner_player(
            f"{variant.value}_{label}", runs[variant, seeds[0]].learner
        )
        for variant in AlgoVariant
    ]
    family_of = {player.name: player.family for player in players}

    checks, rows = [], []
    for scenario in Scenario:
        ahead = 0
        elo_by_family: Dict[str, List[float]] = {}
        for offset in range(len(seeds)):
            schedule_seed = tc.seed + offset
            outcome = run_tournament(
                players,
                scenario,
                tc.n_games,
                schedule_seed,
                config.env,
                k_factor=tc.k_factor,
                initial_rating=tc.initial_rating,
                workers=workers,
            )
            write_reports(
                outcome.report,
                outcome.contrast,
                out_dir / scenario.value / f"seed{schedule_seed}",
            )
            ratings = outcome.elo.ratings
            for name, rating in ratings.items():
                elo_by_family.setdefault(family_of[name], []).append(rating)
            rfac = ratings[f"{AlgoVariant.RFAC.value}_{label}"]
            il = ratings[f"{AlgoVariant.IL.value}_{label}"]
            ahead += rfac > il
        checks.append(CheckResult(
            f"elo_rfac_over_il[{scenario.value}]",
            ahead >= majority(len(seeds)),
            f"RFAC > IL в {ahead}/{len(seeds)} турнирах",
        ))
        rows += comparison_rows(scenario, {
            family: float(np.mean(values))
            for family, values in elo_by_family.items()
        })
    write_csv(out_dir / "elo_comparison.csv", COMPARISON_HEADER, rows)
    return checks


def cmd_experiment(
    config: RunConfig,
    n_seeds: int = 3,
    eval_games: int = 100,
    workers: int = 1,
    echo: Callable[[str], None] = print
) -> int:
    """Настольный эксперимент с выводом PASS/FAIL; 1 при любом FAIL.

    Args:
        config: Конфигурация (мир, гиперпараметры, эпизоды, турнир)
        n_seeds: Число зёрен обучения и турниров
        eval_games: Партий в сериях против случайного и необученного
        workers: Процессов для турнирных матчей
        echo: Вывод строк результата

    Raises:
        ConfigurationError: n_seeds или eval_games меньше 1
    """
    if n_seeds < 1 or eval_games < 1:
        raise ConfigurationError(
            f"Нужно --seeds >= 1 и --eval-games >= 1: {n_seeds}, "
            f"{eval_games}"
        )
    seeds = [config.train.seed + offset for offset in range(n_seeds)]
    out_dir = config.paths.reports / "experiment"
    logger.info(
        "Эксперимент: зёрна %s, %d эпизодов, %d партий турнира",
        seeds,
        config.train.episodes,
        config.tournament.n_games,
    )
    runs = train_population(config, seeds)
    checks = [
        *check_learning(runs, seeds),
        *check_trained_beats(runs, config, seeds, eval_games),
        *check_elo_ordering(runs, config, seeds, out_dir, workers),
    ]
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        echo(f"{status} {check.name}: {check.detail}")
    failed = sum(not check.passed for check in checks)
    echo(f"Проверок: {len(checks)}, провалено: {failed}")
    echo(f"Таблицы: {out_dir}")
    return 1 if failed else 0
