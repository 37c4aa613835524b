"""Тесты соседств и весов внимания."""
import numpy as np
import pytest

from repval.exceptions import ContractViolation
from repval.gradcheck import numeric_gradient, relative_error
from repval.graph import (
    AttentionParams,
    NeighborSet,
    attention_backward,
    attention_weights,
    neighbors,
    uniform_weights,
    weights_or_none,
)


@pytest.fixture
def features():
    """Фикстура признаков владельца 0 и трёх соседей."""
    rng = np.random.default_rng(4)
    return {k: rng.normal(size=5) for k in range(4)}


@pytest.fixture
def params():
    """Фикстура параметров внимания."""
    return AttentionParams.init(5, 3, np.random.default_rng(8))


class TestNeighbors:
    """Тесты построения соседства."""

    def test_radius(self, make_world):
        """Тест чебышёвского радиуса и исключения самого агента."""
        world = make_world([(0, 0), (2, 2)], [(5, 5)])

        assert neighbors(world, 0, 1).members == ()
        assert neighbors(world, 0, 2).members == (1,)
        assert neighbors(world, 0, 5).members == (1, 2)
        assert neighbors(world, 2, 3).members == (1,)

    def test_dead_excluded(self, make_world):
        """Тест исключения мёртвых агентов."""
        world = make_world([(0, 0), (1, 1)], [(2, 2)])
        world.agents[1].hp = 0

        assert neighbors(world, 0, 5).members == (2,)

    def test_dead_owner(self, make_world):
        """Тест соседства мёртвого агента."""
        world = make_world([(0, 0)], [(2, 2)])
        world.agents[0].hp = 0

        with pytest.raises(ContractViolation):
            neighbors(world, 0, 3)

    def test_invalid_sets(self):
        """Тест проверок NeighborSet."""
        with pytest.raises(ContractViolation):
            NeighborSet(1, (0, 1))
        with pytest.raises(ContractViolation):
            NeighborSet(0, (2, 2))


class TestAttention:
    """Тесты весов внимания."""

    def test_distribution(self, features, params):
        """Тест неотрицательности и суммы весов."""
        w = attention_weights(features, NeighborSet(0, (1, 2, 3)), params)

        values = np.array(list(w.weights.values()))
        assert np.all(values >= 0.0)
        assert values.sum() == pytest.approx(1.0, abs=1e-12)
        assert set(w.weights) == {1, 2, 3}

    def test_single_neighbor(self, features, params):
        """Тест единственного соседа: вес 1."""
        w = attention_weights(features, NeighborSet(0, (2,)), params)
        assert w.weights == {2: pytest.approx(1.0)}

    def test_permutation_equivariance(self, features, params):
        """Тест независимости весов от порядка соседей."""
        forward = attention_weights(features, NeighborSet(0, (1, 2, 3)),
                                    params)
        shuffled = attention_weights(features, NeighborSet(0, (3, 1, 2)),
                                     params)
        for k in (1, 2, 3):
            assert forward.weights[k] == pytest.approx(shuffled.weights[k])

    def test_equal_logits_uniform(self, features):
        """Тест равных логитов: веса совпадают с равными."""
        zero = AttentionParams(np.zeros((5, 3)), np.zeros(6))
        nbrs = NeighborSet(0, (1, 2, 3))

        w = attention_weights(features, nbrs, zero)

        expected = uniform_weights(nbrs)
        for k in nbrs.members:
            assert w.weights[k] == pytest.approx(expected.weights[k])

    def test_empty_neighborhood(self, features, params):
        """Тест пустого соседства."""
        with pytest.raises(ContractViolation):
            attention_weights(features, NeighborSet(0, ()), params)
        with pytest.raises(ContractViolation):
            uniform_weights(NeighborSet(0, ()))
        assert weights_or_none(features, NeighborSet(0, ()), params) is None

    def test_missing_features(self, params):
        """Тест отсутствующих признаков соседа."""
        with pytest.raises(ContractViolation):
            attention_weights({0: np.ones(5)}, NeighborSet(0, (1,)), params)

    def test_uniform_fallback(self, features):
        """Тест равных весов без параметров внимания."""
        w = weights_or_none(features, NeighborSet(0, (1, 3)), None)
        assert w.weights == {1: 0.5, 3: 0.5}

    def test_large_logits(self, features):
        """Тест устойчивости softmax при больших логитах."""
        big = AttentionParams(np.full((5, 3), 50.0), np.full(6, 50.0))

        w = attention_weights(features, NeighborSet(0, (1, 2, 3)), big)

        values = np.array(list(w.weights.values()))
        assert np.all(np.isfinite(values))
        assert values.sum() == pytest.approx(1.0)


class TestAttentionBackward:
    """Тесты градиента внимания."""

    def test_matches_finite_differences(self, features, params):
        """Тест градиента по W и a центральными разностями."""
        owner = features[0]
        members = np.stack([features[k] for k in (1, 2, 3)])
        upstream = np.random.default_rng(1).normal(size=3)

        def loss() -> float:
            w = attention_weights(features, NeighborSet(0, (1, 2, 3)),
                                  params)
            return float(w.as_array((1, 2, 3)) @ upstream)

        grads = attention_backward(owner, members, params, upstream)
        numeric = numeric_gradient(loss, [params.W, params.a])

        assert relative_error(grads.W, numeric[0]) < 1e-6
        assert relative_error(grads.a, numeric[1]) < 1e-6
