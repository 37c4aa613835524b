"""Команда train: самообучение варианта и запись чекпоинтов."""

import logging
from pathlib import Path
from typing import Optional

from repval.env.observation import observation_size
from repval.learn import create_learner
from repval.learn.checkpoint import save_learner
from repval.learn.train import TrainingLog, train
from repval.schemas.config import RunConfig

logger = logging.getLogger(__name__)


def player_name(config: RunConfig) -> str:
    """Имя игрока прогона: <ВАРИАНТ>_<метка>."""
    return f"{config.algo.variant.value}_{config.train.run_label}"


def checkpoint_stem(
    config: RunConfig,
    episode: Optional[int] = None
) -> Path:
    """Путь чекпоинта без расширения; без episode - итоговый."""
    name = player_name(config)
    if episode is not None:
        name = f"{name}_ep{episode:05d}"
    return config.paths.checkpoints / name


def cmd_train(config: RunConfig) -> int:
    """Обучение config.algo.variant самоигрой.

    Пишет промежуточные и итоговый чекпоинты в checkpoints/ и журнал
    в logs/<игрок>.csv.

    Returns:
        Код завершения
    """
    name = player_name(config)
    learner = create_learner(
        config.algo.variant,
        observation_size(config.env.view_radius),
        config.algo,
        config.train.seed,
    )

    def meta(episode: int) -> dict:
        return {
            "player": name,
            "env": config.env.model_dump(mode="json"),
            "scenario": config.train.scenario.value,
            "seed": config.train.seed,
            "episode": episode,
        }

    def on_checkpoint(current, log: TrainingLog) -> None:
        episode = len(log)
        ckpt_path, _ = save_learner(
            current,
            checkpoint_stem(config, episode),
            meta(episode),
        )
        first = max(0, episode - config.train.checkpoint_every)
        print(
            f"{name} эпизод {episode}/{config.train.episodes}: "
            f"доходность {log.mean_return(first, episode):.3f}, "
            f"чекпоинт {ckpt_path}"
        )

    logger.info(
        "Обучение %s: %d эпизодов, сценарий %s, seed=%d",
        name,
        config.train.episodes,
        config.train.scenario.value,
        config.train.seed,
    )
    log = train(
        learner,
        config.env,
        config.train.scenario,
        config.train.episodes,
        config.train.seed,
        checkpoint_every=config.train.checkpoint_every,
        on_checkpoint=on_checkpoint,
    )
    ckpt_path, _ = save_learner(
        learner,
        checkpoint_stem(config),
        meta(len(log)),
    )
    log_path = config.paths.logs / f"{name}.csv"
    log.to_csv(log_path)
    print(f"{name}: {len(log)} эпизодов, чекпоинт {ckpt_path}, "
          f"журнал {log_path}")
    return 0
