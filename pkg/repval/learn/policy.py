"""Больцмановская политика, softmax актора и TD-цель."""

from typing import Optional

import numpy as np

from repval.exceptions import ContractViolation, NumericalError


def softmax(logits: np.ndarray) -> np.ndarray:
    """Softmax по последней оси с вычитанием максимума."""
    logits = np.asarray(logits, dtype=float)
    if not np.all(np.isfinite(logits)):
        raise NumericalError(f"Нечисловые логиты: {logits}")
    shifted = np.exp(logits - np.max(logits, axis=-1, keepdims=True))
    return shifted / np.sum(shifted, axis=-1, keepdims=True)


def boltzmann_policy(
    q_values: np.ndarray,
    beta: float,
    negative_sign: bool = False
) -> np.ndarray:
    """pi(a) ~ exp(beta * Q(a)).

    При negative_sign=True используется буквальная запись exp(-beta * Q),
    которая предпочитает действия с меньшей ценностью.

    Raises:
        ContractViolation: beta < 0
        NumericalError: Нечисловые Q
    """
    if beta < 0:
        raise ContractViolation(f"beta должна быть >= 0: {beta}")
    q_values = np.asarray(q_values, dtype=float)
    if not np.all(np.isfinite(q_values)):
        raise NumericalError(f"Нечисловые значения Q: {q_values}")
    sign = -1.0 if negative_sign else 1.0
    return softmax(sign * beta * q_values)


def td_target(
    reward: float,
    gamma: float,
    done: bool,
    next_q_values: np.ndarray,
    beta: float,
    backup: str = "expected",
    negative_sign: bool = False,
    next_policy: Optional[np.ndarray] = None
) -> float:
    """y = r + gamma * v(s') * (1 - done).

    v(s') - ожидание Q целевой сети под больцмановской политикой
    (или под next_policy, если она задана); при backup="max" - максимум.
    """
    if not np.isfinite(reward):
        raise NumericalError(f"Нечисловая награда: {reward}")
    if done:
        return float(reward)
    next_q_values = np.asarray(next_q_values, dtype=float)
    if backup == "max":
        value = float(np.max(next_q_values))
    else:
        if next_policy is None:
            next_policy = boltzmann_policy(next_q_values, beta, negative_sign)
        value = float(next_policy @ next_q_values)
    return float(reward + gamma * value)
