"""Самообучение: обе армии под управлением одного обучаемого."""

import csv
import logging
from dataclasses import astuple, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from repval.env.observation import observation_size, observe_all
from repval.env.world import GridWorld, new_scenario, step
from repval.exceptions import ContractViolation
from repval.learn.buffer import Transition
from repval.learn.qlearner import QLearner
from repval.models.enums import Scenario, Team
from repval.schemas.config import GridConfig

logger = logging.getLogger(__name__)


def episode_seed(seed: int, episode: int) -> int:
    """Зерно мира для эпизода."""
    return int(np.random.SeedSequence([seed, episode]).generate_state(1)[0])


@dataclass
class EpisodeLog:
    """Итоги эпизода; kills и deaths считаются для армии A."""

    episode: int
    mean_return: float
    loss: float
    kills: int
    deaths: int


@dataclass
class TrainingLog:
    """Журнал обучения по эпизодам."""

    episodes: List[EpisodeLog] = field(default_factory=list)

    CSV_HEADER = ("episode", "mean_return", "loss", "kills", "deaths")

    def __len__(self) -> int:
        return len(self.episodes)

    def mean_return(self, first: int, last: int) -> float:
        """Средняя доходность эпизодов [first, last)."""
        chunk = self.episodes[first:last]
        if not chunk:
            return float("nan")
        return float(np.mean([item.mean_return for item in chunk]))

    def to_csv(self, path: Path) -> None:
        """Запись CSV с заголовком; потеря nan, если обновлений не было."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(self.CSV_HEADER)
            for item in self.episodes:
                writer.writerow(astuple(item))


def run_episode(learner, world: GridWorld, episode: int) -> EpisodeLog:
    """Один эпизод самоигры с обновлениями обучаемого."""
    is_q = isinstance(learner, QLearner)
    keep = learner.keeps_context
    config = learner.config
    returns = {agent.id: 0.0 for agent in world.agents}
    losses = []
    trajectory: List[Transition] = []

    observations = observe_all(world)
    vectors = {aid: obs.vector for aid, obs in observations.items()}
    contexts = {
        aid: learner.context_for(world, aid, observations)
        for aid in observations
    }
    inputs = {aid: learner.inputs_for(ctx) for aid, ctx in contexts.items()}

    while not world.finished:
        if keep:
            inputs = {
                aid: learner.inputs_for(ctx) for aid, ctx in contexts.items()
            }
        actions = {
            aid: learner.select(inputs[aid], explore=True)
            for aid in sorted(inputs)
        }
        outcome = step(world, actions)

        next_observations = {} if outcome.terminal else observe_all(world)
        next_vectors = {
            aid: obs.vector for aid, obs in next_observations.items()
        }
        next_contexts = {
            aid: learner.context_for(world, aid, next_observations)
            for aid in next_observations
        }
        next_inputs = {
            aid: learner.inputs_for(ctx) for aid, ctx in next_contexts.items()
        }

        for aid in sorted(actions):
            reward = outcome.rewards[aid]
            returns[aid] += reward
            done = aid not in next_contexts
            transition = Transition(
                obs=vectors[aid],
                action=actions[aid],
                reward=reward,
                next_obs=vectors[aid] if done else next_vectors[aid],
                nbr_inputs=inputs[aid],
                next_nbr_inputs=inputs[aid] if done else next_inputs[aid],
                done=done,
                context=contexts[aid] if keep else None,
                next_context=(
                    next_contexts[aid] if keep and not done else None
                ),
            )
            if is_q:
                learner.buffer.add(transition)
            else:
                trajectory.append(transition)

        if (
            is_q
            and world.step_count % config.update_every == 0
            and len(learner.buffer) >= config.batch_size
        ):
            batch = learner.buffer.sample(config.batch_size)
            losses.append(learner.q_update(batch))

        vectors, contexts, inputs = next_vectors, next_contexts, next_inputs

    if trajectory:
        _, critic_loss = learner.ac_update(trajectory)
        losses.append(critic_loss)

    n = world.config.agents_per_team
    return EpisodeLog(
        episode=episode,
        mean_return=float(np.mean(list(returns.values()))),
        loss=float(np.mean(losses)) if losses else float("nan"),
        kills=n - world.alive_count(Team.B),
        deaths=n - world.alive_count(Team.A),
    )


def train(
    learner,
    env_config: GridConfig,
    scenario: Scenario,
    episodes: int,
    seed: int,
    checkpoint_every: Optional[int] = None,
    on_checkpoint: Optional[Callable[[object, TrainingLog], None]] = None
) -> TrainingLog:
    """Самообучение learner на episodes эпизодах.

    Args:
        learner: QLearner или ACLearner (изменяется на месте)
        env_config: Параметры мира
        scenario: Сценарий расстановки
        episodes: Число эпизодов
        seed: Зерно миров
        checkpoint_every: Интервал вызова on_checkpoint
        on_checkpoint: Обработчик (learner, журнал на момент вызова)

    Returns:
        Журнал обучения

    Raises:
        ContractViolation: Размер наблюдения не совпадает с обучаемым
    """
    expected = observation_size(env_config.view_radius)
    if learner.s_dim != expected:
        raise ContractViolation(
            f"Обучаемый ждёт наблюдения длины {learner.s_dim}, "
            f"мир даёт {expected}"
        )
    log = TrainingLog()
    log_every = checkpoint_every or max(1, episodes // 10)
    for episode in range(episodes):
        world = new_scenario(env_config, scenario, episode_seed(seed, episode))
        log.episodes.append(run_episode(learner, world, episode))

        done = episode + 1
        if done % log_every == 0 or done == episodes:
            logger.info(
                "%s: эпизод %d/%d, доходность %.3f, потеря %.4f, "
                "убийств %d, потерь %d",
                learner.variant.value,
                done,
                episodes,
                log.mean_return(max(0, done - log_every), done),
                log.episodes[-1].loss,
                log.episodes[-1].kills,
                log.episodes[-1].deaths,
            )
        if checkpoint_every and on_checkpoint and done % checkpoint_every == 0:
            on_checkpoint(learner, log)
    return log
