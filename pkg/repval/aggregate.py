"""Агрегаты соседей, нормированные входы Q-сети и оракул разложения Тейлора.

Остаток второго порядка проверяется на квадратичной функции
Q(z_j, z_k) = c.z_j + z_j^T A z_k + 1/2 z_k^T H z_k, у которой гессиан по z_k
постоянен и равен H, так что M = ||H||_2 вычисляется точно.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Tuple

import numpy as np

from repval.exceptions import ContractViolation
from repval.graph import WeightVector, softmax_weights

logger = logging.getLogger(__name__)

NORM_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ZVector:
    """z = (s, a): наблюдение и one-hot действия агента."""

    s_part: np.ndarray
    a_part: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.s_part, self.a_part])


@dataclass(frozen=True, eq=False)
class NormalizedInputs:
    """Четыре нормированных блока входа Q-сети и флаг пустого соседства."""

    own_s: np.ndarray
    own_a: np.ndarray
    nbr_s: np.ndarray
    nbr_a: np.ndarray
    empty_neighborhood: bool

    def to_vector(self) -> np.ndarray:
        """Вход сети: блоки подряд и флаг в конце."""
        return np.concatenate([
            self.own_s,
            self.own_a,
            self.nbr_s,
            self.nbr_a,
            [1.0 if self.empty_neighborhood else 0.0],
        ])


def input_size(s_dim: int, a_dim: int) -> int:
    """Длина вектора NormalizedInputs.to_vector()."""
    return 2 * (s_dim + a_dim) + 1


def l2_normalize(v: np.ndarray) -> np.ndarray:
    """v / ||v||; нулевой вектор при ||v|| <= 1e-12."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm <= NORM_EPS:
        return np.zeros_like(v)
    return v / norm


def l2_normalize_backward(v: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    """Градиент по v для y = v/||v||: (g - y (y.g)) / ||v||."""
    norm = np.linalg.norm(v)
    if norm <= NORM_EPS:
        return np.zeros_like(v, dtype=float)
    y = v / norm
    return (grad_out - y * (y @ grad_out)) / norm


def weighted_aggregate(
    w: WeightVector,
    zs: Mapping[int, ZVector]
) -> ZVector:
    """Покомпонентная взвешенная сумма z_chi = sum_k w_{j,k} z^k.

    Raises:
        ContractViolation: Нет ZVector для соседа
    """
    missing = [k for k in w.weights if k not in zs]
    if missing:
        raise ContractViolation(f"Нет z-векторов для соседей: {missing}")
    if not w.weights:
        raise ContractViolation("Пустой набор весов")
    s_part = sum(weight * zs[k].s_part for k, weight in w.weights.items())
    a_part = sum(weight * zs[k].a_part for k, weight in w.weights.items())
    return ZVector(np.asarray(s_part, float), np.asarray(a_part, float))


def build_q_input(
    own: ZVector,
    w: Optional[WeightVector],
    neighbor_zs: Mapping[int, ZVector]
) -> NormalizedInputs:
    """Вход Q-сети: нормировка своих блоков и агрегата соседей.

    Нормировка применяется к сумме целиком: normalize(sum w z).
    Пустое соседство (w is None или пустые веса) даёт нулевые блоки
    соседей и поднятый флаг.
    """
    own_s = l2_normalize(own.s_part)
    own_a = l2_normalize(own.a_part)
    if w is None or not w.weights:
        return NormalizedInputs(
            own_s,
            own_a,
            np.zeros_like(own_s),
            np.zeros_like(own_a),
            True,
        )
    chi = weighted_aggregate(w, neighbor_zs)
    return NormalizedInputs(
        own_s,
        own_a,
        l2_normalize(chi.s_part),
        l2_normalize(chi.a_part),
        False,
    )


@dataclass(eq=False)
class SmoothQOracle:
    """Квадратичная парная функция для проверки разложения.

    Атрибуты:
        c: Линейный член по z_j
        A: Билинейная связь z_j и z_k
        H: Симметричный гессиан по z_k
    """

    c: np.ndarray
    A: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        if not np.allclose(self.H, self.H.T, atol=0.0, rtol=0.0):
            raise ContractViolation("Гессиан H должен быть симметричным")

    @property
    def smoothness(self) -> float:
        """M = спектральная норма H."""
        if self.H.size == 0:
            return 0.0
        return float(np.max(np.abs(np.linalg.eigvalsh(self.H))))

    @classmethod
    def random(
        cls,
        dim: int,
        M: float,
        rng: np.random.Generator
    ) -> "SmoothQOracle":
        """Случайный оракул размерности dim со спектральной нормой H = M."""
        basis, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
        eigen = rng.uniform(-1.0, 1.0, size=dim)
        eigen[0] = 1.0
        H = basis @ np.diag(M * eigen) @ basis.T
        H = 0.5 * (H + H.T)
        return cls(rng.normal(size=dim), rng.normal(size=(dim, dim)), H)

    def value(self, z_j: np.ndarray, z_k: np.ndarray) -> float:
        """Q(z_j, z_k)."""
        return float(
            self.c @ z_j + z_j @ self.A @ z_k + 0.5 * z_k @ self.H @ z_k
        )

    def grad_k(self, z_j: np.ndarray, z_k: np.ndarray) -> np.ndarray:
        """Аналитический градиент по z_k: A^T z_j + H z_k."""
        return self.A.T @ z_j + self.H @ z_k


@dataclass(eq=False)
class RemainderReport:
    """Разложение sum_k w Q(z_j, z^k) вокруг z_chi.

    exact = zeroth + first_order + remainder по построению.
    """

    exact: float
    zeroth: float
    first_order: float
    remainder: float
    second_order: float
    z_chi: np.ndarray
    deltas: List[np.ndarray]
    weighted_delta: np.ndarray
    lagrange_points: List[Tuple[np.ndarray, float]] = field(
        default_factory=list
    )


def taylor_decompose(
    oracle: SmoothQOracle,
    z_j: ZVector,
    w: WeightVector,
    neighbor_zs: Mapping[int, ZVector]
) -> RemainderReport:
    """Разложение парной функции вокруг взвешенного агрегата.

    Для квадратичного оракула гессиан постоянен, поэтому точка Лагранжа
    подходит любая; сообщается epsilon = 0.5.

    Raises:
        ContractViolation: Пустое соседство или нет z-вектора соседа
    """
    if not w.weights:
        raise ContractViolation("Разложение требует непустого соседства")
    missing = [k for k in w.weights if k not in neighbor_zs]
    if missing:
        raise ContractViolation(f"Нет z-векторов для соседей: {missing}")
    own = z_j.vector
    members = list(w.weights)
    weights = w.as_array(tuple(members))
    points = np.stack([neighbor_zs[k].vector for k in members])

    z_chi = weights @ points
    deltas = points - z_chi
    weighted_delta = weights @ deltas

    exact = float(sum(
        weight * oracle.value(own, point)
        for weight, point in zip(weights, points)
    ))
    zeroth = oracle.value(own, z_chi)
    first_order = float(oracle.grad_k(own, z_chi) @ weighted_delta)
    remainder = exact - zeroth - first_order
    second_order = float(sum(
        weight * 0.5 * delta @ oracle.H @ delta
        for weight, delta in zip(weights, deltas)
    ))
    lagrange = [(z_chi + 0.5 * delta, 0.5) for delta in deltas]
    return RemainderReport(
        exact=exact,
        zeroth=zeroth,
        first_order=first_order,
        remainder=remainder,
        second_order=second_order,
        z_chi=z_chi,
        deltas=list(deltas),
        weighted_delta=weighted_delta,
        lagrange_points=lagrange,
    )


@dataclass
class BoundReport:
    """Итог проверки границы остатка."""

    M: float
    samples: int
    max_abs_remainder: float
    bound: float
    violations: int

    CSV_HEADER = "M,samples,max_abs_remainder,bound,violations"

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_csv_row(self) -> str:
        """Строка CSV в порядке CSV_HEADER."""
        return (
            f"{self.M!r},{self.samples},{self.max_abs_remainder!r},"
            f"{self.bound!r},{self.violations}"
        )


def random_unit_z(
    s_dim: int,
    a_dim: int,
    rng: np.random.Generator
) -> ZVector:
    """ZVector с независимо нормированными s- и a-частями."""
    return ZVector(
        l2_normalize(rng.normal(size=s_dim)),
        l2_normalize(rng.normal(size=a_dim)),
    )


def random_neighborhood(
    s_dim: int,
    a_dim: int,
    rng: np.random.Generator,
    max_neighbors: int = 8
) -> Tuple[ZVector, WeightVector, dict]:
    """Случайные z_j, соседи и веса softmax от случайных логитов."""
    count = int(rng.integers(1, max_neighbors + 1))
    own = random_unit_z(s_dim, a_dim, rng)
    zs = {k: random_unit_z(s_dim, a_dim, rng) for k in range(1, count + 1)}
    weights = softmax_weights(2.0 * rng.normal(size=count))
    w = WeightVector(0, {k: float(x) for k, x in zip(zs, weights)})
    return own, w, zs


def remainder_bound_check(
    oracle: SmoothQOracle,
    n_samples: int,
    seed: int,
    s_dim: Optional[int] = None,
    bound_factor: float = 4.0
) -> BoundReport:
    """Проверка |остатка| <= bound_factor * M на случайных выборках.

    Args:
        oracle: Квадратичный оракул размерности s_dim + a_dim
        n_samples: Число выборок
        seed: Зерно
        s_dim: Длина s-части (по умолчанию половина размерности)
        bound_factor: Множитель границы (4 для теоретической)

    Returns:
        Отчёт с максимумом остатка и числом нарушений
    """
    dim = oracle.H.shape[0]
    s_dim = dim // 2 if s_dim is None else s_dim
    a_dim = dim - s_dim
    M = oracle.smoothness
    bound = bound_factor * M
    rng = np.random.default_rng(seed)

    max_abs = 0.0
    violations = 0
    for _ in range(n_samples):
        own, w, zs = random_neighborhood(s_dim, a_dim, rng)
        report = taylor_decompose(oracle, own, w, zs)
        magnitude = abs(report.remainder)
        max_abs = max(max_abs, magnitude)
        if magnitude > bound + NORM_EPS:
            violations += 1

    result = BoundReport(M, n_samples, max_abs, bound, violations)
    logger.info("Граница остатка: %s", result.to_csv_row())
    return result


def adversarial_case(
    M: float,
    s_dim: int = 2,
    a_dim: int = 2
) -> Tuple[SmoothQOracle, ZVector, WeightVector, dict]:
    """Конфигурация, на которой |остаток| = M.

    Два противоположных соседа с равными весами и H = M*I: z_chi = 0,
    ||delta||^2 = 2, остаток = 1/2 * M * 2 = M. Для единичных s/a частей
    sum_k w ||delta_k||^2 = sum_k w ||z_k||^2 - ||z_chi||^2 <= 2, так что
    это максимум, и граница 4M не достигается.
    """
    dim = s_dim + a_dim
    oracle = SmoothQOracle(np.zeros(dim), np.zeros((dim, dim)),
                           M * np.eye(dim))
    e_s = np.eye(s_dim)[0]
    e_a = np.eye(a_dim)[0]
    zs = {1: ZVector(e_s, e_a), 2: ZVector(-e_s, -e_a)}
    own = ZVector(e_s, e_a)
    w = WeightVector(0, {1: 0.5, 2: 0.5})
    return oracle, own, w, zs


def cancellation_check(
    n_draws: int,
    seed: int,
    s_dim: int = 6,
    a_dim: int = 4
) -> Tuple[float, float]:
    """Максимумы |sum_k w delta_k|_inf и |first_order| по выборкам."""
    rng = np.random.default_rng(seed)
    oracle = SmoothQOracle.random(s_dim + a_dim, 1.0, rng)
    max_delta = 0.0
    max_first = 0.0
    for _ in range(n_draws):
        own, w, zs = random_neighborhood(s_dim, a_dim, rng)
        report = taylor_decompose(oracle, own, w, zs)
        max_delta = max(
            max_delta,
            float(np.max(np.abs(report.weighted_delta)))
        )
        max_first = max(max_first, abs(report.first_order))
    return max_delta, max_first
