"""Тесты больцмановской политики и TD-цели."""
import numpy as np
import pytest

from repval.exceptions import ContractViolation, NumericalError
from repval.learn.policy import boltzmann_policy, softmax, td_target


class TestBoltzmann:
    """Тесты распределения exp(beta * Q)."""

    def test_distribution(self):
        """Тест суммы и порядка вероятностей."""
        probs = boltzmann_policy(np.array([1.0, 2.0, 0.5]), beta=1.5)

        assert probs.sum() == pytest.approx(1.0)
        assert np.all(probs > 0)
        assert np.argmax(probs) == 1

    def test_zero_beta_uniform(self):
        """Тест beta = 0: равномерное распределение."""
        probs = boltzmann_policy(np.array([5.0, -3.0, 0.0, 1.0]), beta=0.0)
        assert np.allclose(probs, 0.25)

    def test_negative_sign_prefers_low_values(self):
        """Тест буквального знака: предпочтение меньшей ценности."""
        q = np.array([1.0, 2.0, 0.5])
        assert np.argmax(boltzmann_policy(q, 1.0, negative_sign=True)) == 2

    def test_high_beta_greedy(self):
        """Тест beta = 1000: почти вся масса на argmax."""
        probs = boltzmann_policy(np.array([0.0, 1.0, 0.5]), beta=1000.0)
        assert probs[1] >= 1.0 - 1e-6

    def test_shift_invariance(self):
        """Тест инвариантности к сдвигу Q."""
        q = np.array([1.0, 2.0, 0.5])
        assert np.array_equal(
            boltzmann_policy(q, 1.5), boltzmann_policy(q + 3.0, 1.5)
        )

    def test_large_values_stable(self):
        """Тест устойчивости при больших Q."""
        probs = boltzmann_policy(np.array([1e4, 1e4 - 1.0, -1e4]), beta=10.0)

        assert np.all(np.isfinite(probs))
        assert probs.sum() == pytest.approx(1.0)

    def test_invalid_input(self):
        """Тест отрицательной beta и нечисловых Q."""
        with pytest.raises(ContractViolation):
            boltzmann_policy(np.zeros(3), beta=-1.0)
        with pytest.raises(NumericalError):
            boltzmann_policy(np.array([0.0, np.nan]), beta=1.0)

    def test_softmax_rows(self):
        """Тест softmax по строкам батча."""
        probs = softmax(np.array([[0.0, 1.0], [3.0, 3.0]]))
        assert np.allclose(probs.sum(axis=1), 1.0)
        assert np.allclose(probs[1], 0.5)


class TestTdTarget:
    """Тесты TD-цели."""

    def test_expected_backup(self):
        """Тест ожидания под равномерной политикой."""
        y = td_target(1.0, 0.9, False, np.array([1.0, 3.0]), beta=0.0)
        assert y == pytest.approx(2.8)

    def test_max_backup(self):
        """Тест оценки максимумом."""
        y = td_target(1.0, 0.9, False, np.array([1.0, 3.0]), beta=0.0,
                      backup="max")
        assert y == pytest.approx(3.7)

    def test_terminal(self):
        """Тест терминального перехода: цель равна награде."""
        y = td_target(-0.5, 0.9, True, np.array([100.0, 200.0]), beta=1.0)
        assert y == -0.5

    def test_explicit_policy(self):
        """Тест явной политики следующего состояния."""
        y = td_target(0.0, 0.5, False, np.array([2.0, 4.0]), beta=1.0,
                      next_policy=np.array([1.0, 0.0]))
        assert y == pytest.approx(1.0)

    def test_nan_reward(self):
        """Тест нечисловой награды."""
        with pytest.raises(NumericalError):
            td_target(np.nan, 0.9, False, np.zeros(2), beta=1.0)
