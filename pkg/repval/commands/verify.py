"""Команда verify: численные проверки разложения, градиентов и рейтинга."""

import logging
from functools import partial
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from repval.aggregate import (
    BoundReport,
    SmoothQOracle,
    adversarial_case,
    cancellation_check,
    random_neighborhood,
    remainder_bound_check,
    taylor_decompose,
)
from repval.gradcheck import (
    actor_gradient_error,
    critic_gradient_error,
    mlp_gradient_error,
    q_loss_gradient_error,
    score_identity_error,
)
from repval.graph import AttentionParams, NeighborSet, attention_weights
from repval.learn.policy import boltzmann_policy
from repval.models.enums import AlgoVariant, Outcome
from repval.tourney.elo import elo_update, expected_score

logger = logging.getLogger(__name__)

SMOOTHNESS_LEVELS = (0.0, 0.5, 1.0, 2.0)
ORACLE_S_DIM = 6
ORACLE_A_DIM = 4
GRADIENT_CASES = 100
GRADIENT_TOL = 1e-4
SCORE_IDENTITY_TOL = 1e-10


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_identity(samples: int, seed: int) -> CheckResult:
    """exact = zeroth + first + remainder, remainder = second_order."""
    rng = np.random.default_rng([seed, 10])
    oracle = SmoothQOracle.random(ORACLE_S_DIM + ORACLE_A_DIM, 1.0, rng)
    worst = 0.0
    for _ in range(samples):
        own, w, zs = random_neighborhood(ORACLE_S_DIM, ORACLE_A_DIM, rng)
        report = taylor_decompose(oracle, own, w, zs)
        total = report.zeroth + report.first_order + report.remainder
        worst = max(
            worst,
            abs(report.exact - total),
            abs(report.remainder - report.second_order),
        )
    return CheckResult("taylor_identity", worst < 1e-9, f"max={worst:.3e}")


def check_cancellation(samples: int, seed: int) -> CheckResult:
    """Первый порядок обнуляется: sum_k w delta_k = 0."""
    max_delta, max_first = cancellation_check(samples, seed)
    passed = max_delta < 1e-12 and max_first < 1e-10
    return CheckResult(
        "first_order_cancellation",
        passed,
        f"max|sum w delta|={max_delta:.3e}, max|first|={max_first:.3e}",
    )


def check_bounds(
    samples: int,
    seed: int,
    bound_factor: float,
    csv_path: Optional[Path] = None
) -> List[CheckResult]:
    """Граница остатка для каждого M и её достижимость."""
    checks = []
    rows = [BoundReport.CSV_HEADER]
    for index, M in enumerate(SMOOTHNESS_LEVELS):
        rng = np.random.default_rng([seed, 20, index])
        oracle = SmoothQOracle.random(ORACLE_S_DIM + ORACLE_A_DIM, M, rng)
        report = remainder_bound_check(
            oracle,
            samples,
            seed + index,
            s_dim=ORACLE_S_DIM,
            bound_factor=bound_factor,
        )
        rows.append(report.to_csv_row())
        checks.append(CheckResult(
            f"remainder_bound[M={M}]",
            report.passed,
            f"max|R|={report.max_abs_remainder:.4f}, "
            f"bound={report.bound:.4f}, violations={report.violations}",
        ))
        if M == 0.0:
            continue
        adv_oracle, own, w, zs = adversarial_case(M)
        attained = abs(taylor_decompose(adv_oracle, own, w, zs).remainder)
        checks.append(CheckResult(
            f"remainder_attained[M={M}]",
            abs(attained - M) < 1e-9
            and attained <= bound_factor * M + 1e-12,
            f"|R|={attained:.6f}, bound={bound_factor * M:.4f}",
        ))
    if csv_path is not None:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text("\n".join(rows) + "\n")
    return checks


def _worst(error: Callable[[int], float], seed: int, cases: int) -> float:
    return max(error(seed * cases + case) for case in range(cases))


def check_gradients(
    seed: int,
    cases: int = GRADIENT_CASES
) -> List[CheckResult]:
    """Центральные разности: MLP, TD-потеря, критик и актор.

    Плюс тождество sum_a pi(a) grad log pi(a) = 0.
    """
    checks = []

    def add(name: str, worst: float, tol: float = GRADIENT_TOL) -> None:
        checks.append(CheckResult(
            name,
            worst < tol,
            f"max err={worst:.3e}",
        ))

    add("mlp_backward", _worst(mlp_gradient_error, seed, cases))
    for variant in (AlgoVariant.IL, AlgoVariant.MFQ, AlgoVariant.RFQ):
        add(
            f"td_loss_gradient[{variant.value}]",
            _worst(partial(q_loss_gradient_error, variant), seed, cases),
        )
    for variant in (AlgoVariant.AC, AlgoVariant.MFAC, AlgoVariant.RFAC):
        add(
            f"critic_gradient[{variant.value}]",
            _worst(partial(critic_gradient_error, variant), seed, cases),
        )
        add(
            f"actor_gradient[{variant.value}]",
            _worst(partial(actor_gradient_error, variant), seed, cases),
        )
    add(
        "score_identity",
        _worst(score_identity_error, seed, cases),
        SCORE_IDENTITY_TOL,
    )
    return checks


def check_elo(seed: int) -> CheckResult:
    """Сохранение суммы, E_a + E_b = 1 и контрольный пример."""
    rng = np.random.default_rng([seed, 30])
    worst = 0.0
    for _ in range(1000):
        r_a, r_b = rng.uniform(800.0, 2400.0, size=2)
        outcome = list(Outcome)[int(rng.integers(3))]
        new_a, new_b = elo_update(r_a, r_b, outcome, 32.0)
        worst = max(
            worst,
            abs((new_a + new_b) - (r_a + r_b)),
            abs(expected_score(r_a, r_b) + expected_score(r_b, r_a) - 1.0),
        )
    example = elo_update(1200.0, 1200.0, Outcome.A_WINS, 32.0)
    passed = worst < 1e-9 and example == (1216.0, 1184.0)
    return CheckResult("elo_identities", passed, f"max={worst:.3e}")


def check_distributions(seed: int) -> CheckResult:
    """Веса внимания и больцмановская политика: неотрицательны, сумма 1."""
    rng = np.random.default_rng([seed, 40])
    worst = 0.0
    for _ in range(200):
        count = int(rng.integers(1, 9))
        params = AttentionParams.init(6, 4, rng)
        features = {k: rng.normal(size=6) for k in range(count + 1)}
        nbrs = NeighborSet(0, tuple(range(1, count + 1)))
        weights = np.array(
            list(attention_weights(features, nbrs, params).weights.values())
        )
        probs = boltzmann_policy(rng.normal(size=17), rng.uniform(0, 5))
        for values in (weights, probs):
            if np.any(values < 0):
                worst = np.inf
            worst = max(worst, abs(float(np.sum(values)) - 1.0))
    return CheckResult("distributions", worst < 1e-9, f"max={worst:.3e}")


def cmd_verify(
    seed: int,
    samples: int,
    bound_factor: float = 4.0,
    csv_path: Optional[Path] = None,
    echo: Callable[[str], None] = print,
    gradient_cases: int = GRADIENT_CASES
) -> int:
    """Все проверки с выводом PASS/FAIL; 1 при любом FAIL.

    Args:
        seed: Зерно
        samples: Число случайных выборок разложения на проверку
        bound_factor: Множитель границы остатка (4 - теоретическая)
        csv_path: Куда записать CSV отчётов границы
        echo: Вывод строк результата
        gradient_cases: Случайных сетей на каждую проверку градиента
    """
    if samples == 0:
        logger.warning("samples=0: проверки разложения тривиальны")
    checks = [
        check_identity(samples, seed),
        check_cancellation(samples, seed),
        *check_bounds(samples, seed, bound_factor, csv_path),
        *check_gradients(seed, gradient_cases),
        check_elo(seed),
        check_distributions(seed),
    ]
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        echo(f"{status} {check.name}: {check.detail}")
    failed = sum(not check.passed for check in checks)
    echo(f"Проверок: {len(checks)}, провалено: {failed}")
    return 1 if failed else 0
