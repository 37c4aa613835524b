"""Тесты обучаемых: градиенты, сходимость, самоигра и чекпоинты."""
import json

import numpy as np
import pytest

from repval.aggregate import NormalizedInputs
from repval.env.observation import observation_size
from repval.env.world import new_scenario
from repval.exceptions import (
    CheckpointError,
    ContractViolation,
    NumericalError,
)
from repval.gradcheck import (
    actor_gradient_error,
    critic_gradient_error,
    q_loss_gradient_error,
    random_context,
    score_identity_error,
)
from repval.learn import ACLearner, QLearner, create_learner
from repval.learn.buffer import ReplayBuffer, Transition
from repval.learn.checkpoint import block_names, load_learner, save_learner
from repval.learn.context import build_context, inputs_from_context
from repval.learn.train import train
from repval.models.enums import AlgoVariant, NeighborMode, Scenario
from repval.nn import Mlp
from repval.schemas.config import AlgoConfig

N_STATES = 5


def tabular_inputs(state: int, n_states: int = N_STATES) -> NormalizedInputs:
    """Вход сети с one-hot состоянием и без соседей."""
    return NormalizedInputs(
        np.eye(n_states)[state],
        np.zeros(2),
        np.zeros(n_states),
        np.zeros(2),
        False,
    )


def chain_transition(state: int, action: int) -> Transition:
    """Переход цепочки: действие 0 - вперёд, действие 1 - остаться."""
    if action == 0:
        following = (state + 1) % N_STATES
        reward = 1.0 if state == N_STATES - 1 else 0.0
    else:
        following, reward = state, 0.2
    return Transition(
        obs=np.eye(N_STATES)[state],
        action=action,
        reward=reward,
        next_obs=np.eye(N_STATES)[following],
        nbr_inputs=tabular_inputs(state),
        next_nbr_inputs=tabular_inputs(following),
        done=False,
    )


def bandit_transition(action: int) -> Transition:
    """Терминальный переход с наградой 1 за действие 0."""
    inputs = NormalizedInputs(
        np.ones(1), np.zeros(2), np.zeros(1), np.zeros(2), True
    )
    return Transition(
        obs=np.ones(1),
        action=action,
        reward=1.0 if action == 0 else 0.0,
        next_obs=np.ones(1),
        nbr_inputs=inputs,
        next_nbr_inputs=inputs,
        done=True,
    )


class TestReplayBuffer:
    """Тесты буфера воспроизведения."""

    def test_capacity(self):
        """Тест вытеснения самого старого перехода."""
        buffer = ReplayBuffer(3, np.random.default_rng(0))
        for action in range(5):
            buffer.add(bandit_transition(action % 2))

        assert len(buffer) == 3

    def test_sample_distinct(self):
        """Тест выборки без повторов."""
        buffer = ReplayBuffer(10, np.random.default_rng(0))
        items = [bandit_transition(0) for _ in range(6)]
        for item in items:
            buffer.add(item)

        batch = buffer.sample(4)

        assert len(batch) == 4
        assert len({id(t) for t in batch}) == 4
        assert len(buffer.sample(50)) == 6

    def test_invalid(self):
        """Тест пустого буфера и нулевой ёмкости."""
        with pytest.raises(ContractViolation):
            ReplayBuffer(10, np.random.default_rng(0)).sample(1)
        with pytest.raises(ContractViolation):
            ReplayBuffer(0, np.random.default_rng(0))

    def test_nan_reward(self):
        """Тест нечисловой награды в переходе."""
        inputs = tabular_inputs(0)
        with pytest.raises(NumericalError):
            Transition(np.zeros(5), 0, np.nan, np.zeros(5), inputs, inputs,
                       False)


class TestGradients:
    """Тесты аналитических градиентов потерь."""

    @pytest.mark.parametrize(
        "variant",
        [AlgoVariant.IL, AlgoVariant.MFQ, AlgoVariant.RFQ]
    )
    @pytest.mark.parametrize("seed", range(3))
    def test_td_loss_gradient(self, variant, seed):
        """Тест градиента по phi и вниманию центральными разностями."""
        assert q_loss_gradient_error(variant, seed) < 1e-4

    @pytest.mark.parametrize(
        "variant",
        [AlgoVariant.AC, AlgoVariant.MFAC, AlgoVariant.RFAC]
    )
    @pytest.mark.parametrize("seed", range(3))
    def test_critic_gradient(self, variant, seed):
        """Тест градиента критика по phi и вниманию при фиксированных целях."""
        assert critic_gradient_error(variant, seed) < 1e-4

    @pytest.mark.parametrize(
        "variant",
        [AlgoVariant.AC, AlgoVariant.MFAC, AlgoVariant.RFAC]
    )
    @pytest.mark.parametrize("seed", range(3))
    def test_actor_gradient(self, variant, seed):
        """Тест градиента актора центральными разностями."""
        assert actor_gradient_error(variant, seed) < 1e-4

    @pytest.mark.parametrize("seed", range(3))
    def test_score_identity(self, seed):
        """Тест нулевого матожидания score-функции по политике."""
        assert score_identity_error(seed) < 1e-10


class TestVariantInputs:
    """Тесты входов по режиму соседей."""

    def test_single_neighbor_same_for_uniform_and_attention(self):
        """Тест одного соседа: MFQ и RFQ видят одинаковый вход."""
        rng = np.random.default_rng(0)
        context = random_context(rng, 6, 4, n_neighbors=1)
        config = AlgoConfig(embed_dim=3)
        learner = QLearner.create(AlgoVariant.RFQ, 6, config, 0, 4)

        uniform = inputs_from_context(context, NeighborMode.UNIFORM)
        attended = inputs_from_context(
            context,
            NeighborMode.ATTENTION,
            learner.attention,
        )

        assert np.allclose(uniform.to_vector(), attended.to_vector())

    def test_none_mode_ignores_neighbors(self):
        """Тест режима без соседей."""
        context = random_context(np.random.default_rng(1), 6, 4, 3)

        inputs = inputs_from_context(context, NeighborMode.NONE)

        assert inputs.empty_neighborhood
        assert not np.any(inputs.nbr_s)

    def test_context_radius_zero(self, tiny_grid):
        """Тест нулевого радиуса: пустое соседство."""
        world = new_scenario(tiny_grid, Scenario.BATTLE, 0)

        context = build_context(world, 0, 0)

        assert context.size == 0
        assert context.own.s_part.shape == (observation_size(1),)


class TestQLearner:
    """Тесты Q-обучаемого."""

    def test_rejects_ac_variant(self, tiny_algo):
        """Тест создания с вариантом актор-критика."""
        net = Mlp.init([7, 2], np.random.default_rng(0))
        with pytest.raises(ContractViolation):
            QLearner(AlgoVariant.AC, tiny_algo, 1, 2,
                     np.random.default_rng(0), net,
                     ReplayBuffer(4, np.random.default_rng(0)))

    def test_empty_batch(self, tiny_algo):
        """Тест пустого батча."""
        learner = QLearner.create(AlgoVariant.IL, 5, tiny_algo, 0, 2)
        with pytest.raises(ContractViolation):
            learner.q_update([])

    def test_loss_decreases_on_terminal_batch(self):
        """Тест монотонного убывания потери на фиксированных целях."""
        config = AlgoConfig(hidden=[], lr=1e-3, tau=0.01)
        learner = QLearner.create(AlgoVariant.IL, N_STATES, config, 0, 2)
        batch = [
            Transition(
                obs=np.eye(N_STATES)[s],
                action=s % 2,
                reward=float(s),
                next_obs=np.eye(N_STATES)[s],
                nbr_inputs=tabular_inputs(s),
                next_nbr_inputs=tabular_inputs(s),
                done=True,
            )
            for s in range(N_STATES)
        ]

        losses = [learner.q_update(batch) for _ in range(100)]

        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
        assert losses[-1] < losses[0]

    def test_converges_to_bellman_fixed_point(self):
        """Тест сходимости RFQ к решению уравнения оптимальности."""
        gamma = 0.5
        config = AlgoConfig(
            hidden=[],
            gamma=gamma,
            beta=0.0,
            lr=0.1,
            tau=1.0,
            batch_size=10,
            backup="max",
        )
        learner = QLearner.create(AlgoVariant.RFQ, N_STATES, config, 0, 2)
        pairs = [(s, a) for s in range(N_STATES) for a in (0, 1)]
        batch = [chain_transition(s, a) for s, a in pairs]

        for _ in range(5000):
            learner.q_update(batch)

        exact = np.zeros((N_STATES, 2))
        for _ in range(200):
            following = exact.copy()
            for t, (s, a) in zip(batch, pairs):
                nxt = int(np.argmax(t.next_obs))
                exact[s, a] = t.reward + gamma * following[nxt].max()

        for s in range(N_STATES):
            q = learner.q_values(tabular_inputs(s))
            assert np.allclose(q, exact[s], atol=1e-2)

    def test_greedy_is_argmax(self, tiny_algo):
        """Тест жадного выбора без исследования."""
        learner = QLearner.create(AlgoVariant.IL, N_STATES, tiny_algo, 3, 2)
        inputs = tabular_inputs(2)

        action = learner.select(inputs, explore=False)

        assert action == int(np.argmax(learner.q_values(inputs)))


class TestACLearner:
    """Тесты актор-критика."""

    def test_rejects_q_variant(self, tiny_algo):
        """Тест создания с Q-вариантом."""
        net = Mlp.init([7, 2], np.random.default_rng(0))
        with pytest.raises(ContractViolation):
            ACLearner(AlgoVariant.IL, tiny_algo, 1, 2,
                      np.random.default_rng(0), net, net.copy())

    def test_bandit(self):
        """Тест бандита: актор выбирает действие с наградой."""
        config = AlgoConfig(hidden=[], actor_lr=0.1, critic_lr=0.1)
        learner = ACLearner.create(AlgoVariant.AC, 1, config, 0, 2)
        trajectory = [bandit_transition(0), bandit_transition(1)]

        for _ in range(500):
            learner.ac_update(trajectory)

        probs = learner.policy_probs(trajectory[0].nbr_inputs)
        assert probs[0] > 0.9

    def test_zero_critic_keeps_actor(self):
        """Тест нулевого критика: актор не меняется."""
        config = AlgoConfig(hidden=[], actor_lr=0.5, critic_lr=0.0)
        learner = ACLearner.create(AlgoVariant.AC, 1, config, 0, 2)
        learner.critic = Mlp([np.zeros((7, 2))], [np.zeros(2)])
        before = [p.copy() for p in learner.actor.parameters()]

        learner.ac_update([bandit_transition(0), bandit_transition(1)])

        for old, new in zip(before, learner.actor.parameters()):
            assert np.array_equal(old, new)

    def test_empty_trajectory(self, tiny_algo):
        """Тест пустой траектории."""
        learner = ACLearner.create(AlgoVariant.AC, 1, tiny_algo, 0, 2)
        with pytest.raises(ContractViolation):
            learner.ac_update([])

    def test_policy_distribution(self, tiny_algo):
        """Тест распределения актора."""
        learner = ACLearner.create(AlgoVariant.MFAC, 1, tiny_algo, 0, 2)

        probs = learner.action_probs(bandit_transition(0).nbr_inputs)

        assert probs.sum() == pytest.approx(1.0)
        assert np.all(probs >= 0.0)


class TestSelfPlay:
    """Тесты самообучения на малом мире."""

    @pytest.mark.parametrize(
        "variant",
        [AlgoVariant.RFQ, AlgoVariant.RFAC, AlgoVariant.MFQ]
    )
    def test_deterministic(self, variant, tiny_grid, tiny_algo):
        """Тест совпадения журналов и весов при одном зерне."""
        def run():
            learner = create_learner(
                variant, observation_size(1), tiny_algo, 7
            )
            log = train(learner, tiny_grid, Scenario.BATTLE, 2, seed=7)
            return learner, log

        first, first_log = run()
        second, second_log = run()

        assert [e.mean_return for e in first_log.episodes] == [
            e.mean_return for e in second_log.episodes
        ]
        for name in block_names(first):
            a, b = getattr(first, name), getattr(second, name)
            arrays_a = a.parameters() if isinstance(a, Mlp) else [a.W, a.a]
            arrays_b = b.parameters() if isinstance(b, Mlp) else [b.W, b.a]
            for x, y in zip(arrays_a, arrays_b):
                assert np.array_equal(x, y)

    def test_attention_without_neighbors_matches_il(self, tiny_grid,
                                                    tiny_algo):
        """Тест RFQ с нулевым радиусом: совпадение с IL."""
        grid = tiny_grid.model_copy(update={"neighbor_radius": 0})
        s_dim = observation_size(1)
        il = create_learner(AlgoVariant.IL, s_dim, tiny_algo, 5)
        rfq = create_learner(AlgoVariant.RFQ, s_dim, tiny_algo, 5)

        il_log = train(il, grid, Scenario.WILD_WAR, 2, seed=5)
        rfq_log = train(rfq, grid, Scenario.WILD_WAR, 2, seed=5)

        assert [e.mean_return for e in il_log.episodes] == [
            e.mean_return for e in rfq_log.episodes
        ]
        for x, y in zip(il.q_net.parameters(), rfq.q_net.parameters()):
            assert np.array_equal(x, y)

    def test_log_and_csv(self, tiny_grid, tiny_algo, tmp_path):
        """Тест журнала эпизодов и его CSV."""
        learner = create_learner(
            AlgoVariant.AC, observation_size(1), tiny_algo, 0
        )
        calls = []

        log = train(
            learner,
            tiny_grid,
            Scenario.BATTLE,
            3,
            seed=0,
            checkpoint_every=1,
            on_checkpoint=lambda current, log: calls.append(len(log)),
        )
        path = tmp_path / "log.csv"
        log.to_csv(path)

        assert len(log) == 3
        assert calls == [1, 2, 3]
        lines = path.read_text().split("\n")
        assert lines[0] == "episode,mean_return,loss,kills,deaths"
        assert len(lines) == 5
        assert lines[-1] == ""
        for entry in log.episodes:
            assert 0 <= entry.kills <= tiny_grid.agents_per_team
            assert 0 <= entry.deaths <= tiny_grid.agents_per_team
            assert np.isfinite(entry.loss)

    def test_observation_mismatch(self, tiny_grid, tiny_algo):
        """Тест несовпадения размера наблюдения."""
        learner = create_learner(AlgoVariant.IL, 10, tiny_algo, 0)
        with pytest.raises(ContractViolation):
            train(learner, tiny_grid, Scenario.BATTLE, 1, seed=0)


class TestCheckpoint:
    """Тесты сохранения обучаемых."""

    @pytest.mark.parametrize("variant", list(AlgoVariant))
    def test_save_load(self, variant, tiny_algo, tmp_path):
        """Тест совпадения распределений после загрузки."""
        s_dim = observation_size(1)
        learner = create_learner(variant, s_dim, tiny_algo, 4)
        stem = tmp_path / f"{variant.value}_A"
        save_learner(learner, stem, {"seed": 4, "episode": 0})

        loaded, meta = load_learner(stem)

        assert loaded.variant is variant
        assert meta["episode"] == 0
        context = random_context(
            np.random.default_rng(0), s_dim, loaded.n_actions, 3
        )
        inputs = learner.inputs_for(context)
        assert np.array_equal(
            learner.action_probs(inputs),
            loaded.action_probs(loaded.inputs_for(context)),
        )

    def test_missing(self, tmp_path):
        """Тест отсутствующего чекпоинта."""
        with pytest.raises(CheckpointError):
            load_learner(tmp_path / "absent")

    def test_truncated(self, tiny_algo, tmp_path):
        """Тест усечённого бинарного файла."""
        learner = create_learner(AlgoVariant.RFQ, 5, tiny_algo, 0)
        stem = tmp_path / "rfq"
        ckpt_path, _ = save_learner(learner, stem, {})
        ckpt_path.write_bytes(ckpt_path.read_bytes()[:-16])

        with pytest.raises(CheckpointError):
            load_learner(stem)

    def test_variant_mismatch(self, tiny_algo, tmp_path):
        """Тест описания с чужим вариантом."""
        learner = create_learner(AlgoVariant.RFAC, 5, tiny_algo, 0)
        stem = tmp_path / "rfac"
        _, json_path = save_learner(learner, stem, {})
        sidecar = json.loads(json_path.read_text())
        sidecar["variant"] = "MFAC"
        json_path.write_text(json.dumps(sidecar))

        with pytest.raises(CheckpointError):
            load_learner(stem)

    def test_dotted_stem(self, tiny_algo, tmp_path):
        """Тест имени чекпоинта с точкой."""
        learner = create_learner(AlgoVariant.IL, 5, tiny_algo, 0)
        ckpt_path, json_path = save_learner(learner, tmp_path / "il.v2", {})

        assert ckpt_path.name == "il.v2.ckpt"
        assert json_path.name == "il.v2.json"
        load_learner(tmp_path / "il.v2")
