"""Многослойный перцептрон с ручным обратным распространением.

Скрытые слои с ReLU, выходной слой линейный. Веса слоя хранятся как
матрица (in, out), вход может быть вектором или батчем строк.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, List, Sequence, Tuple

import numpy as np

from repval.exceptions import (
    CheckpointError,
    ContractViolation,
    NumericalError,
)

CKPT_MAGIC = "MLPCKPT"
CKPT_VERSION = "v1"
_DTYPE = np.dtype("<f8")


@dataclass(eq=False)
class Mlp:
    """Полносвязная сеть.

    Атрибуты:
        weights: Матрицы слоёв (in, out)
        biases: Смещения слоёв (out,)
    """

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ContractViolation("Число матриц и смещений не совпадает")
        for index, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.ndim != 2 or b.shape != (W.shape[1],):
                raise ContractViolation(f"Несовместный слой {index}")
            if index and W.shape[0] != self.weights[index - 1].shape[1]:
                raise ContractViolation(
                    f"Размерности слоёв {index - 1} и {index} не стыкуются"
                )

    @property
    def layer_dims(self) -> Tuple[int, ...]:
        """Размеры слоёв от входа к выходу."""
        return (self.weights[0].shape[0],) + tuple(
            W.shape[1] for W in self.weights
        )

    @classmethod
    def init(
        cls,
        layer_dims: Sequence[int],
        rng: np.random.Generator
    ) -> "Mlp":
        """Равномерная инициализация в [-1/sqrt(fan_in), 1/sqrt(fan_in)]."""
        if len(layer_dims) < 2:
            raise ContractViolation("Нужно минимум два размера слоя")
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(rng.uniform(-bound, bound, size=fan_out))
        return cls(weights, biases)

    def copy(self) -> "Mlp":
        return Mlp(
            [W.copy() for W in self.weights],
            [b.copy() for b in self.biases],
        )

    def parameters(self) -> List[np.ndarray]:
        """Параметры в порядке сериализации: слой за слоем, W затем b."""
        params = []
        for W, b in zip(self.weights, self.biases):
            params.extend([W, b])
        return params


@dataclass(eq=False)
class Gradients:
    """Градиенты той же формы, что параметры сети, и градиент по входу."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    input: np.ndarray

    def parameters(self) -> List[np.ndarray]:
        grads = []
        for dW, db in zip(self.weights, self.biases):
            grads.extend([dW, db])
        return grads

    def scaled(self, factor: float) -> "Gradients":
        return Gradients(
            [factor * dW for dW in self.weights],
            [factor * db for db in self.biases],
            factor * self.input,
        )


def _check_input(net: Mlp, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] != net.layer_dims[0]:
        raise ContractViolation(
            f"Ожидался вход длины {net.layer_dims[0]}, получено {x.shape}"
        )
    return x


def _forward_cache(
    net: Mlp,
    x: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    activations = [x]
    pre_activations = []
    last = len(net.weights) - 1
    for index, (W, b) in enumerate(zip(net.weights, net.biases)):
        z = activations[-1] @ W + b
        pre_activations.append(z)
        activations.append(z if index == last else np.maximum(z, 0.0))
    return activations, pre_activations


def forward(net: Mlp, x: np.ndarray) -> np.ndarray:
    """Прямой проход.

    Raises:
        ContractViolation: Неверная длина входа
    """
    x = _check_input(net, x)
    activations, _ = _forward_cache(net, x)
    return activations[-1]


def backward(net: Mlp, x: np.ndarray, upstream: np.ndarray) -> Gradients:
    """Градиенты скаляра <forward(x), upstream> по параметрам и входу.

    Для батча градиенты по параметрам суммируются по строкам.

    Raises:
        ContractViolation: Несовпадение форм
    """
    x = _check_input(net, x)
    upstream = np.asarray(upstream, dtype=float)
    expected = x.shape[:-1] + (net.layer_dims[-1],)
    if upstream.shape != expected:
        raise ContractViolation(
            f"Ожидался градиент формы {expected}, получено {upstream.shape}"
        )
    activations, pre_activations = _forward_cache(net, x)

    batched = x.ndim == 2
    grad_w = [None] * len(net.weights)
    grad_b = [None] * len(net.weights)
    delta = upstream
    for index in reversed(range(len(net.weights))):
        if index != len(net.weights) - 1:
            delta = delta * (pre_activations[index] > 0)
        prev = activations[index]
        if batched:
            grad_w[index] = prev.T @ delta
            grad_b[index] = delta.sum(axis=0)
        else:
            grad_w[index] = np.outer(prev, delta)
            grad_b[index] = delta.copy()
        delta = delta @ net.weights[index].T
    return Gradients(grad_w, grad_b, delta)


def _check_congruent(net: Mlp, other_params: List[np.ndarray]) -> None:
    params = net.parameters()
    if len(params) != len(other_params) or any(
        p.shape != q.shape for p, q in zip(params, other_params)
    ):
        raise ContractViolation("Формы параметров не совпадают")


def sgd_step(net: Mlp, grads: Gradients, lr: float) -> Mlp:
    """Шаг p <- p - lr * g; возвращает новую сеть.

    Raises:
        ContractViolation: lr < 0 или несовпадение форм
        NumericalError: Нечисловой градиент
    """
    if lr < 0:
        raise ContractViolation(f"Шаг обучения должен быть >= 0: {lr}")
    _check_congruent(net, grads.parameters())
    for index, g in enumerate(grads.parameters()):
        if not np.all(np.isfinite(g)):
            raise NumericalError(
                f"Нечисловой градиент в тензоре {index} "
                f"(слой {index // 2}, {'W' if index % 2 == 0 else 'b'}), "
                f"max|g|={np.nanmax(np.abs(g))}"
            )
    return Mlp(
        [W - lr * dW for W, dW in zip(net.weights, grads.weights)],
        [b - lr * db for b, db in zip(net.biases, grads.biases)],
    )


def soft_update(target: Mlp, online: Mlp, tau: float) -> Mlp:
    """t <- (1 - tau) * t + tau * o; возвращает новую целевую сеть.

    Raises:
        ContractViolation: tau вне [0, 1] или несовпадение форм
    """
    if not 0.0 <= tau <= 1.0:
        raise ContractViolation(f"tau вне [0, 1]: {tau}")
    _check_congruent(target, online.parameters())
    return Mlp(
        [(1.0 - tau) * t + tau * o
         for t, o in zip(target.weights, online.weights)],
        [(1.0 - tau) * t + tau * o
         for t, o in zip(target.biases, online.biases)],
    )


def write_mlp(stream: BinaryIO, net: Mlp) -> None:
    """Запись блока MLPCKPT: строка заголовка и float64 little-endian."""
    dims = ",".join(str(d) for d in net.layer_dims)
    stream.write(f"{CKPT_MAGIC} {CKPT_VERSION} {dims}\n".encode("ascii"))
    for param in net.parameters():
        stream.write(np.ascontiguousarray(param, dtype=_DTYPE).tobytes())


def read_mlp(stream: BinaryIO) -> Mlp:
    """Чтение блока MLPCKPT.

    Raises:
        CheckpointError: Неверный заголовок или усечённые данные
    """
    header = stream.readline().decode("ascii", errors="replace").split()
    if len(header) != 3 or header[:2] != [CKPT_MAGIC, CKPT_VERSION]:
        raise CheckpointError(f"Неверный заголовок блока сети: {header}")
    try:
        dims = [int(d) for d in header[2].split(",")]
    except ValueError as error:
        raise CheckpointError(
            f"Неверные размеры слоёв: {header[2]}"
        ) from error

    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(_read_array(stream, (fan_in, fan_out)))
        biases.append(_read_array(stream, (fan_out,)))
    return Mlp(weights, biases)


def _read_array(stream: BinaryIO, shape: Tuple[int, ...]) -> np.ndarray:
    count = int(np.prod(shape))
    raw = stream.read(count * _DTYPE.itemsize)
    if len(raw) != count * _DTYPE.itemsize:
        raise CheckpointError("Усечённые данные чекпоинта")
    return np.frombuffer(raw, dtype=_DTYPE).astype(float).reshape(shape)


def save_mlp(path: Path, net: Mlp) -> None:
    """Сохранение одной сети в файл."""
    with open(path, "wb") as stream:
        write_mlp(stream, net)


def load_mlp(path: Path) -> Mlp:
    """Загрузка одной сети из файла."""
    try:
        with open(path, "rb") as stream:
            return read_mlp(stream)
    except FileNotFoundError as error:
        raise CheckpointError(f"Чекпоинт не найден: {path}") from error
