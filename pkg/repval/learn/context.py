"""Контекст соседей агента и построение входов Q-сети по варианту."""

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

import numpy as np

from repval.aggregate import (
    NormalizedInputs,
    ZVector,
    build_q_input,
    l2_normalize_backward,
)
from repval.env.actions import one_hot
from repval.env.observation import Observation, observe
from repval.env.world import GridWorld
from repval.graph import (
    AttentionGrads,
    AttentionParams,
    NeighborSet,
    attention_backward,
    attention_logits,
    neighbors,
    softmax_weights,
    weights_or_none,
)
from repval.models.enums import NeighborMode


@dataclass(frozen=True, eq=False)
class NeighborContext:
    """Сырые данные для входа агента: свой z и z соседей.

    Действия соседей - их действия на предыдущем шаге.
    """

    owner: int
    own: ZVector
    members: Tuple[int, ...]
    nbr_s: np.ndarray
    nbr_a: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)

    def neighbor_zs(self) -> dict:
        return {
            k: ZVector(self.nbr_s[i], self.nbr_a[i])
            for i, k in enumerate(self.members)
        }

    def features(self) -> dict:
        """Признаки h для внимания: векторы наблюдений."""
        feats = {self.owner: self.own.s_part}
        feats.update(
            {k: self.nbr_s[i] for i, k in enumerate(self.members)}
        )
        return feats


def build_context(
    world: GridWorld,
    agent_id: int,
    radius: int,
    observations: Optional[Mapping[int, Observation]] = None
) -> NeighborContext:
    """Контекст живого агента; radius=0 даёт пустое соседство."""
    agent = world.get_living(agent_id)
    observations = observations if observations is not None else {}

    def vector(k: int) -> np.ndarray:
        obs = observations.get(k)
        return (obs if obs is not None else observe(world, k)).vector

    own = ZVector(vector(agent_id), one_hot(agent.last_action))
    members = neighbors(world, agent_id, radius).members if radius else ()
    s_dim, a_dim = own.s_part.size, own.a_part.size
    if members:
        nbr_s = np.stack([vector(k) for k in members])
        nbr_a = np.stack(
            [one_hot(world.agents[k].last_action) for k in members]
        )
    else:
        nbr_s = np.zeros((0, s_dim))
        nbr_a = np.zeros((0, a_dim))
    return NeighborContext(agent_id, own, members, nbr_s, nbr_a)


def inputs_from_context(
    context: NeighborContext,
    mode: NeighborMode,
    params: Optional[AttentionParams] = None
) -> NormalizedInputs:
    """NormalizedInputs по режиму соседей.

    NONE игнорирует соседей, UNIFORM - равные веса, ATTENTION - веса
    внимания с параметрами params.
    """
    if mode is NeighborMode.NONE or context.size == 0:
        return build_q_input(context.own, None, {})
    nbrs = NeighborSet(context.owner, context.members)
    w = weights_or_none(
        context.features(),
        nbrs,
        params if mode is NeighborMode.ATTENTION else None,
    )
    return build_q_input(context.own, w, context.neighbor_zs())


def attention_grads_from_input(
    context: NeighborContext,
    params: AttentionParams,
    grad_input: np.ndarray
) -> AttentionGrads:
    """Градиент по параметрам внимания из градиента по входу Q-сети.

    Цепочка: блоки соседей -> нормировка -> взвешенная сумма -> softmax
    -> LeakyReLU -> (W, a).
    """
    if context.size == 0:
        return AttentionGrads.zeros_like(params)
    s_dim = context.own.s_part.size
    a_dim = context.own.a_part.size
    offset = s_dim + a_dim
    grad_s = grad_input[offset:offset + s_dim]
    grad_a = grad_input[offset + s_dim:offset + s_dim + a_dim]

    logits = attention_logits(context.own.s_part, context.nbr_s, params)
    weights = softmax_weights(logits)
    chi_s = weights @ context.nbr_s
    chi_a = weights @ context.nbr_a
    grad_weights = (
        context.nbr_s @ l2_normalize_backward(chi_s, grad_s)
        + context.nbr_a @ l2_normalize_backward(chi_a, grad_a)
    )
    return attention_backward(
        context.own.s_part,
        context.nbr_s,
        params,
        grad_weights,
    )
