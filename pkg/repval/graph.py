"""Соседства агентов и веса представления (одноголовое внимание GAT)."""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from repval.env.world import GridWorld
from repval.exceptions import ContractViolation, NumericalError


@dataclass(frozen=True)
class NeighborSet:
    """Соседи агента owner в порядке возрастания идентификаторов."""

    owner: int
    members: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.owner in self.members:
            raise ContractViolation("Агент не может быть своим соседом")
        if len(set(self.members)) != len(self.members):
            raise ContractViolation("Соседи должны быть различны")

    @property
    def size(self) -> int:
        """N^j = |N(j)|."""
        return len(self.members)


@dataclass(eq=False)
class AttentionParams:
    """Общие параметры внимания одного обучаемого.

    Атрибуты:
        W: Матрица (feature_dim x embed_dim)
        a: Вектор длины 2*embed_dim
        leaky_slope: Наклон отрицательной ветви LeakyReLU
    """

    W: np.ndarray
    a: np.ndarray
    leaky_slope: float = 0.2

    @classmethod
    def init(
        cls,
        feature_dim: int,
        embed_dim: int,
        rng: np.random.Generator,
        leaky_slope: float = 0.2
    ) -> "AttentionParams":
        """Равномерная инициализация в [-1/sqrt(fan_in), 1/sqrt(fan_in)]."""
        bound_w = 1.0 / np.sqrt(feature_dim)
        bound_a = 1.0 / np.sqrt(2 * embed_dim)
        W = rng.uniform(-bound_w, bound_w, size=(feature_dim, embed_dim))
        a = rng.uniform(-bound_a, bound_a, size=2 * embed_dim)
        return cls(W, a, leaky_slope)

    @property
    def embed_dim(self) -> int:
        return self.W.shape[1]

    def copy(self) -> "AttentionParams":
        """Глубокая копия."""
        return AttentionParams(self.W.copy(), self.a.copy(), self.leaky_slope)


@dataclass(eq=False)
class AttentionGrads:
    """Градиенты по параметрам внимания."""

    W: np.ndarray
    a: np.ndarray

    @classmethod
    def zeros_like(cls, params: AttentionParams) -> "AttentionGrads":
        return cls(np.zeros_like(params.W), np.zeros_like(params.a))

    def add(self, other: "AttentionGrads") -> None:
        """Накопление на месте."""
        self.W += other.W
        self.a += other.a


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Веса w_{j,k} по соседям агента owner."""

    owner: int
    weights: Dict[int, float] = field(default_factory=dict)

    def as_array(self, members: Tuple[int, ...]) -> np.ndarray:
        """Веса в порядке members."""
        return np.array([self.weights[k] for k in members], dtype=float)


def neighbors(world: GridWorld, j: int, radius: int) -> NeighborSet:
    """Живые агенты обеих армий в чебышёвском радиусе от j.

    Raises:
        ContractViolation: Агент j мёртв или неизвестен
    """
    owner = world.get_living(j)
    x, y = owner.pos
    members = tuple(
        agent.id
        for agent in world.agents
        if agent.alive
        and agent.id != j
        and max(abs(agent.pos[0] - x), abs(agent.pos[1] - y)) <= radius
    )
    return NeighborSet(j, members)


def _leaky(u: np.ndarray, slope: float) -> np.ndarray:
    return np.where(u > 0, u, slope * u)


def attention_logits(
    owner_feature: np.ndarray,
    member_features: np.ndarray,
    params: AttentionParams
) -> np.ndarray:
    """Логиты e_{j,k} = LeakyReLU(a . [W h_j, W h_k])."""
    embed = params.embed_dim
    pre = (
        owner_feature @ params.W @ params.a[:embed]
        + member_features @ params.W @ params.a[embed:]
    )
    return _leaky(pre, params.leaky_slope)


def softmax_weights(logits: np.ndarray) -> np.ndarray:
    """Softmax с вычитанием максимума."""
    if not np.all(np.isfinite(logits)):
        raise NumericalError(f"Нечисловые логиты внимания: {logits}")
    shifted = np.exp(logits - np.max(logits))
    return shifted / np.sum(shifted)


def _stack_features(
    features: Mapping[int, np.ndarray],
    nbrs: NeighborSet
) -> Tuple[np.ndarray, np.ndarray]:
    if nbrs.size == 0:
        raise ContractViolation(
            f"Пустое соседство агента {nbrs.owner}: веса не определены"
        )
    missing = [k for k in (nbrs.owner,) + nbrs.members if k not in features]
    if missing:
        raise ContractViolation(f"Нет признаков для агентов: {missing}")
    owner = np.asarray(features[nbrs.owner], dtype=float)
    members = np.stack([np.asarray(features[k], dtype=float)
                        for k in nbrs.members])
    return owner, members


def attention_weights(
    features: Mapping[int, np.ndarray],
    nbrs: NeighborSet,
    params: AttentionParams
) -> WeightVector:
    """Веса внимания над непустым соседством.

    Args:
        features: Вектор признаков h для владельца и каждого соседа
        nbrs: Соседство
        params: Параметры внимания

    Returns:
        Неотрицательные веса с суммой 1

    Raises:
        ContractViolation: Пустое соседство или нет признаков
    """
    owner, members = _stack_features(features, nbrs)
    weights = softmax_weights(attention_logits(owner, members, params))
    return WeightVector(
        nbrs.owner,
        {k: float(w) for k, w in zip(nbrs.members, weights)}
    )


def attention_backward(
    owner_feature: np.ndarray,
    member_features: np.ndarray,
    params: AttentionParams,
    grad_weights: np.ndarray
) -> AttentionGrads:
    """Градиент по (W, a) по градиенту, пришедшему в веса.

    Args:
        owner_feature: h_j
        member_features: Матрица h_k (K x feature_dim)
        params: Параметры внимания
        grad_weights: dL/dw_{j,k}, длина K

    Returns:
        Градиенты по W и a
    """
    embed = params.embed_dim
    a_own, a_nbr = params.a[:embed], params.a[embed:]
    own_embed = owner_feature @ params.W
    nbr_embed = member_features @ params.W
    pre = own_embed @ a_own + nbr_embed @ a_nbr
    weights = softmax_weights(_leaky(pre, params.leaky_slope))

    grad_logits = weights * (grad_weights - weights @ grad_weights)
    grad_pre = grad_logits * np.where(pre > 0, 1.0, params.leaky_slope)
    total = np.sum(grad_pre)

    grad_a = np.concatenate([total * own_embed, grad_pre @ nbr_embed])
    grad_W = (
        np.outer(owner_feature, a_own) * total
        + np.outer(grad_pre @ member_features, a_nbr)
    )
    return AttentionGrads(grad_W, grad_a)


def uniform_weights(nbrs: NeighborSet) -> WeightVector:
    """Равные веса 1/N^j (среднее поле).

    Raises:
        ContractViolation: Пустое соседство
    """
    if nbrs.size == 0:
        raise ContractViolation(
            f"Пустое соседство агента {nbrs.owner}: веса не определены"
        )
    weight = 1.0 / nbrs.size
    return WeightVector(nbrs.owner, {k: weight for k in nbrs.members})


def weights_or_none(
    features: Mapping[int, np.ndarray],
    nbrs: NeighborSet,
    params: Optional[AttentionParams]
) -> Optional[WeightVector]:
    """Веса внимания или равные; None для пустого соседства."""
    if nbrs.size == 0:
        return None
    if params is None:
        return uniform_weights(nbrs)
    return attention_weights(features, nbrs, params)
