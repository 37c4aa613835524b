"""Шесть обучаемых алгоритмов и самообучение."""

from typing import Union

from repval.env.actions import N_ACTIONS
from repval.learn.aclearner import ACLearner
from repval.learn.base import Learner
from repval.learn.buffer import ReplayBuffer, Transition
from repval.learn.policy import boltzmann_policy, softmax, td_target
from repval.learn.qlearner import QLearner
from repval.models.enums import AlgoVariant
from repval.schemas.config import AlgoConfig

AnyLearner = Union[QLearner, ACLearner]


def create_learner(
    variant: AlgoVariant,
    s_dim: int,
    config: AlgoConfig,
    seed: int,
    n_actions: int = N_ACTIONS
) -> AnyLearner:
    """QLearner для IL/MFQ/RFQ, ACLearner для AC/MFAC/RFAC."""
    factory = QLearner if variant.is_q_learner else ACLearner
    return factory.create(variant, s_dim, config, seed, n_actions)


__all__ = [
    "ACLearner",
    "AnyLearner",
    "Learner",
    "QLearner",
    "ReplayBuffer",
    "Transition",
    "boltzmann_policy",
    "create_learner",
    "softmax",
    "td_target",
]
