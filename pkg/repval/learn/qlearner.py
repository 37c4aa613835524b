"""Внеполитичные Q-обучаемые: IL, MFQ, RFQ."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from repval.aggregate import NormalizedInputs, input_size
from repval.env.actions import N_ACTIONS
from repval.exceptions import ContractViolation, NumericalError
from repval.graph import AttentionGrads, AttentionParams
from repval.learn.base import Learner
from repval.learn.buffer import ReplayBuffer, Transition
from repval.learn.context import (
    attention_grads_from_input,
    inputs_from_context,
)
from repval.learn.policy import boltzmann_policy, td_target
from repval.models.enums import AlgoVariant, NeighborMode
from repval.nn import Gradients, Mlp, backward, forward, sgd_step, soft_update
from repval.schemas.config import AlgoConfig


def attention_step(
    params: AttentionParams,
    grads: AttentionGrads,
    lr: float
) -> AttentionParams:
    """Шаг SGD по параметрам внимания.

    Raises:
        NumericalError: Нечисловой градиент
    """
    if not (np.all(np.isfinite(grads.W)) and np.all(np.isfinite(grads.a))):
        raise NumericalError("Нечисловой градиент параметров внимания")
    return AttentionParams(
        params.W - lr * grads.W,
        params.a - lr * grads.a,
        params.leaky_slope,
    )


def attention_soft_update(
    target: AttentionParams,
    online: AttentionParams,
    tau: float
) -> AttentionParams:
    return AttentionParams(
        (1.0 - tau) * target.W + tau * online.W,
        (1.0 - tau) * target.a + tau * online.a,
        target.leaky_slope,
    )


def stack_inputs(inputs: Sequence[NormalizedInputs]) -> np.ndarray:
    """Батч входов (B, D)."""
    return np.stack([item.to_vector() for item in inputs])


class QLearner(Learner):
    """Q-обучаемый с буфером воспроизведения и целевой сетью.

    Атрибуты:
        q_net: Онлайн-сеть phi
        target_net: Целевая сеть phi с чертой
        target_attention: Целевая копия внимания для входов s'
        buffer: Буфер воспроизведения
    """

    def __init__(
        self,
        variant: AlgoVariant,
        config: AlgoConfig,
        s_dim: int,
        n_actions: int,
        rng: np.random.Generator,
        q_net: Mlp,
        buffer: ReplayBuffer,
        attention: Optional[AttentionParams] = None
    ):
        if not variant.is_q_learner:
            raise ContractViolation(f"{variant.value} не Q-алгоритм")
        super().__init__(variant, config, s_dim, n_actions, rng, attention)
        self.q_net = q_net
        self.target_net = q_net.copy()
        self.target_attention = attention.copy() if attention else None
        self.buffer = buffer

    @classmethod
    def create(
        cls,
        variant: AlgoVariant,
        s_dim: int,
        config: AlgoConfig,
        seed: int,
        n_actions: int = N_ACTIONS
    ) -> "QLearner":
        """Новый обучаемый со случайной инициализацией.

        Сеть и исследование берут один генератор, внимание и буфер -
        отдельные потоки, поэтому RFQ с нулевым радиусом повторяет IL.
        """
        rng = np.random.default_rng(seed)
        dims = [input_size(s_dim, n_actions), *config.hidden, n_actions]
        q_net = Mlp.init(dims, rng)
        attention = None
        if variant.neighbor_mode is NeighborMode.ATTENTION:
            attention = AttentionParams.init(
                s_dim,
                config.embed_dim,
                np.random.default_rng([seed, 1]),
                config.leaky_slope,
            )
        buffer = ReplayBuffer(
            config.buffer_capacity,
            np.random.default_rng([seed, 2]),
        )
        return cls(variant, config, s_dim, n_actions, rng, q_net, buffer,
                   attention)

    def q_values(self, inputs: NormalizedInputs) -> np.ndarray:
        return forward(self.q_net, inputs.to_vector())

    def action_probs(self, inputs: NormalizedInputs) -> np.ndarray:
        return boltzmann_policy(
            self.q_values(inputs),
            self.config.beta,
            self.config.negative_sign,
        )

    def greedy(self, inputs: NormalizedInputs) -> int:
        return int(np.argmax(self.q_values(inputs)))

    def _current_inputs(self, transition: Transition) -> NormalizedInputs:
        context = transition.context
        if self.keeps_context and context is not None and context.size:
            return inputs_from_context(
                context,
                NeighborMode.ATTENTION,
                self.attention,
            )
        return transition.nbr_inputs

    def _next_inputs(self, transition: Transition) -> NormalizedInputs:
        context = transition.next_context
        if self.keeps_context and context is not None and context.size:
            return inputs_from_context(
                context,
                NeighborMode.ATTENTION,
                self.target_attention,
            )
        return transition.next_nbr_inputs

    def targets(self, batch: Sequence[Transition]) -> np.ndarray:
        """TD-цели y по целевой сети и целевому вниманию."""
        next_q = forward(
            self.target_net,
            stack_inputs([self._next_inputs(t) for t in batch]),
        )
        return np.array([
            td_target(
                t.reward,
                self.config.gamma,
                t.done,
                next_q[i],
                self.config.beta,
                self.config.backup,
                self.config.negative_sign,
            )
            for i, t in enumerate(batch)
        ])

    def loss_and_grads(
        self,
        batch: Sequence[Transition]
    ) -> Tuple[float, Gradients, Optional[AttentionGrads]]:
        """Потеря mean (y - Q(x, a))^2 и её градиенты.

        Цели считаются по целевым параметрам и не дифференцируются.
        """
        if not batch:
            raise ContractViolation("Пустой батч")
        x = stack_inputs([self._current_inputs(t) for t in batch])
        actions = np.array([t.action for t in batch])
        rows = np.arange(len(batch))

        q = forward(self.q_net, x)
        errors = self.targets(batch) - q[rows, actions]
        loss = float(np.mean(errors ** 2))

        upstream = np.zeros_like(q)
        upstream[rows, actions] = -2.0 * errors / len(batch)
        grads = backward(self.q_net, x, upstream)

        attention_grads = None
        if self.attention is not None:
            attention_grads = AttentionGrads.zeros_like(self.attention)
            for i, t in enumerate(batch):
                if t.context is not None and t.context.size:
                    attention_grads.add(attention_grads_from_input(
                        t.context,
                        self.attention,
                        grads.input[i],
                    ))
        return loss, grads, attention_grads

    def q_update(self, batch: List[Transition]) -> float:
        """Один шаг по phi (и вниманию для RFQ) и мягкое обновление целей.

        Raises:
            ContractViolation: Пустой батч
            NumericalError: Нечисловая потеря
        """
        loss, grads, attention_grads = self.loss_and_grads(batch)
        if not np.isfinite(loss):
            raise NumericalError(
                f"Нечисловая TD-потеря {loss} ({self.variant.value}, "
                f"батч {len(batch)}, max|r|="
                f"{max(abs(t.reward) for t in batch)})"
            )
        self.q_net = sgd_step(self.q_net, grads, self.config.lr)
        self.target_net = soft_update(
            self.target_net,
            self.q_net,
            self.config.tau,
        )
        if attention_grads is not None:
            self.attention = attention_step(
                self.attention,
                attention_grads,
                self.config.lr,
            )
            self.target_attention = attention_soft_update(
                self.target_attention,
                self.attention,
                self.config.tau,
            )
        return loss
