"""Актор-критики: AC, MFAC, RFAC."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from repval.aggregate import NormalizedInputs, input_size
from repval.env.actions import N_ACTIONS
from repval.exceptions import ContractViolation, NumericalError
from repval.graph import AttentionGrads, AttentionParams
from repval.learn.base import Learner
from repval.learn.buffer import Transition
from repval.learn.context import (
    attention_grads_from_input,
    inputs_from_context,
)
from repval.learn.policy import softmax, td_target
from repval.learn.qlearner import attention_step, stack_inputs
from repval.models.enums import AlgoVariant, NeighborMode
from repval.nn import Gradients, Mlp, backward, forward, sgd_step
from repval.schemas.config import AlgoConfig


class ACLearner(Learner):
    """Актор pi_theta и критик Q_phi над одним входом.

    Критик без целевой сети: v(s') = sum_a pi(a|s') Q(s', a) при
    зафиксированных параметрах. Внимание RFAC учится только через
    потерю критика.
    """

    def __init__(
        self,
        variant: AlgoVariant,
        config: AlgoConfig,
        s_dim: int,
        n_actions: int,
        rng: np.random.Generator,
        actor: Mlp,
        critic: Mlp,
        attention: Optional[AttentionParams] = None
    ):
        if variant.is_q_learner:
            raise ContractViolation(f"{variant.value} не актор-критик")
        super().__init__(variant, config, s_dim, n_actions, rng, attention)
        self.actor = actor
        self.critic = critic

    @classmethod
    def create(
        cls,
        variant: AlgoVariant,
        s_dim: int,
        config: AlgoConfig,
        seed: int,
        n_actions: int = N_ACTIONS
    ) -> "ACLearner":
        """Новый актор-критик со случайной инициализацией."""
        rng = np.random.default_rng(seed)
        dims = [input_size(s_dim, n_actions), *config.hidden, n_actions]
        actor = Mlp.init(dims, rng)
        critic = Mlp.init(dims, rng)
        attention = None
        if variant.neighbor_mode is NeighborMode.ATTENTION:
            attention = AttentionParams.init(
                s_dim,
                config.embed_dim,
                np.random.default_rng([seed, 1]),
                config.leaky_slope,
            )
        return cls(variant, config, s_dim, n_actions, rng, actor, critic,
                   attention)

    def policy_probs(self, inputs: NormalizedInputs) -> np.ndarray:
        """pi_theta(. | inputs)."""
        return softmax(forward(self.actor, inputs.to_vector()))

    def action_probs(self, inputs: NormalizedInputs) -> np.ndarray:
        return self.policy_probs(inputs)

    def score_gradient(self, x: np.ndarray, action: int) -> Gradients:
        """grad_theta log pi(action | x): upstream onehot - pi."""
        probs = softmax(forward(self.actor, x))
        upstream = -probs
        upstream[action] += 1.0
        return backward(self.actor, x, upstream)

    def _inputs(
        self,
        transition: Transition,
        next_state: bool = False
    ) -> NormalizedInputs:
        context = transition.next_context if next_state else (
            transition.context
        )
        if self.keeps_context and context is not None and context.size:
            return inputs_from_context(
                context,
                NeighborMode.ATTENTION,
                self.attention,
            )
        return transition.next_nbr_inputs if next_state else (
            transition.nbr_inputs
        )

    def critic_targets(self, trajectory: Sequence[Transition]) -> np.ndarray:
        """TD-цели критика y = r + gamma * sum_a pi(a|s') Q(s', a)."""
        x_next = stack_inputs([self._inputs(t, True) for t in trajectory])
        next_q = forward(self.critic, x_next)
        next_pi = softmax(forward(self.actor, x_next))
        return np.array([
            td_target(
                t.reward,
                self.config.gamma,
                t.done,
                next_q[i],
                self.config.beta,
                next_policy=next_pi[i],
            )
            for i, t in enumerate(trajectory)
        ])

    def critic_loss_and_grads(
        self,
        trajectory: Sequence[Transition],
        targets: Optional[np.ndarray] = None
    ) -> Tuple[float, Gradients, Optional[AttentionGrads]]:
        """Потеря критика mean (y - Q(x, a))^2 с полуградиентом.

        Цели не дифференцируются; без targets они считаются по текущим
        параметрам.
        """
        if targets is None:
            targets = self.critic_targets(trajectory)
        x = stack_inputs([self._inputs(t) for t in trajectory])
        actions = np.array([t.action for t in trajectory])
        rows = np.arange(len(trajectory))

        q = forward(self.critic, x)
        errors = targets - q[rows, actions]
        loss = float(np.mean(errors ** 2))

        upstream = np.zeros_like(q)
        upstream[rows, actions] = -2.0 * errors / len(trajectory)
        grads = backward(self.critic, x, upstream)

        attention_grads = None
        if self.attention is not None:
            attention_grads = AttentionGrads.zeros_like(self.attention)
            for i, t in enumerate(trajectory):
                if t.context is not None and t.context.size:
                    attention_grads.add(attention_grads_from_input(
                        t.context,
                        self.attention,
                        grads.input[i],
                    ))
        return loss, grads, attention_grads

    def actor_loss_and_grads(
        self,
        trajectory: Sequence[Transition]
    ) -> Tuple[float, Gradients]:
        """-mean log pi(a|x) * Q(x, a) и его градиент по theta.

        С advantage_baseline вместо Q берётся Q - sum_a pi(a) Q(a).
        """
        x = stack_inputs([self._inputs(t) for t in trajectory])
        actions = np.array([t.action for t in trajectory])
        rows = np.arange(len(trajectory))

        q = forward(self.critic, x)
        probs = softmax(forward(self.actor, x))
        weight = q[rows, actions]
        if self.config.advantage_baseline:
            weight = weight - np.sum(probs * q, axis=1)

        log_pi = np.log(np.maximum(probs[rows, actions], 1e-300))
        loss = float(-np.mean(log_pi * weight))

        score = -probs
        score[rows, actions] += 1.0
        upstream = -(weight[:, None] * score) / len(trajectory)
        return loss, backward(self.actor, x, upstream)

    def ac_update(self, trajectory: List[Transition]) -> Tuple[float, float]:
        """Шаг критика, затем шаг актора по той же траектории.

        Returns:
            (actor_loss, critic_loss)

        Raises:
            ContractViolation: Пустая траектория
            NumericalError: Нечисловая потеря
        """
        if not trajectory:
            raise ContractViolation("Пустая траектория")
        critic_loss, grads, attention_grads = self.critic_loss_and_grads(
            trajectory
        )
        if not np.isfinite(critic_loss):
            raise NumericalError(
                f"Нечисловая потеря критика {critic_loss} "
                f"({self.variant.value}, {len(trajectory)} переходов)"
            )
        self.critic = sgd_step(self.critic, grads, self.config.critic_lr)
        if attention_grads is not None:
            self.attention = attention_step(
                self.attention,
                attention_grads,
                self.config.critic_lr,
            )

        actor_loss, actor_grads = self.actor_loss_and_grads(trajectory)
        if not np.isfinite(actor_loss):
            raise NumericalError(
                f"Нечисловая потеря актора {actor_loss} "
                f"({self.variant.value})"
            )
        self.actor = sgd_step(self.actor, actor_grads, self.config.actor_lr)
        return actor_loss, critic_loss
