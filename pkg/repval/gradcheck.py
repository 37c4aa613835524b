"""Проверки аналитических градиентов центральными разностями."""

from typing import Callable, List, Sequence, Union

import numpy as np

from repval.aggregate import ZVector
from repval.learn.aclearner import ACLearner
from repval.learn.buffer import Transition
from repval.learn.context import NeighborContext, inputs_from_context
from repval.learn.policy import softmax
from repval.learn.qlearner import QLearner
from repval.models.enums import AlgoVariant
from repval.nn import Mlp, backward, forward
from repval.schemas.config import AlgoConfig

FD_EPS = 1e-6


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max|a - n| / max(1e-6, max(|a| + |n|))."""
    scale = max(1e-6, float(np.max(np.abs(analytic) + np.abs(numeric))))
    return float(np.max(np.abs(analytic - numeric))) / scale


def numeric_gradient(
    loss: Callable[[], float],
    params: Sequence[np.ndarray],
    eps: float = FD_EPS
) -> List[np.ndarray]:
    """Центральные разности по каждому элементу массивов params.

    Массивы изменяются на месте и восстанавливаются.
    """
    grads = []
    for param in params:
        grad = np.zeros_like(param)
        flat, out = param.reshape(-1), grad.reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + eps
            plus = loss()
            flat[i] = saved - eps
            minus = loss()
            flat[i] = saved
            out[i] = (plus - minus) / (2.0 * eps)
        grads.append(grad)
    return grads


def _flat(arrays: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.ravel(a) for a in arrays])


def mlp_gradient_error(seed: int, dims: Sequence[int] = (5, 4, 3)) -> float:
    """Ошибка backward для скаляра <forward(x), u> на батче из трёх строк."""
    rng = np.random.default_rng(seed)
    net = Mlp.init(dims, rng)
    x = rng.normal(size=(3, dims[0]))
    upstream = rng.normal(size=(3, dims[-1]))
    grads = backward(net, x, upstream)

    def loss() -> float:
        return float(np.sum(forward(net, x) * upstream))

    numeric = numeric_gradient(loss, net.parameters() + [x])
    analytic = grads.parameters() + [grads.input]
    return relative_error(_flat(analytic), _flat(numeric))


def random_context(
    rng: np.random.Generator,
    s_dim: int,
    n_actions: int,
    n_neighbors: int,
    owner: int = 0
) -> NeighborContext:
    """Контекст со случайными наблюдениями и one-hot действиями."""
    def one_hots(count: int) -> np.ndarray:
        return np.eye(n_actions)[rng.integers(n_actions, size=count)]

    members = tuple(range(owner + 1, owner + 1 + n_neighbors))
    return NeighborContext(
        owner,
        ZVector(rng.normal(size=s_dim), one_hots(1)[0]),
        members,
        rng.normal(size=(n_neighbors, s_dim)),
        one_hots(n_neighbors).reshape(n_neighbors, n_actions),
    )


def random_batch(
    learner: Union[QLearner, ACLearner],
    rng: np.random.Generator,
    size: int = 4,
    n_neighbors: int = 3
) -> List[Transition]:
    """Батч переходов со случайными контекстами для learner."""
    mode = learner.neighbor_mode
    keep = learner.keeps_context
    batch = []
    for index in range(size):
        context = random_context(
            rng, learner.s_dim, learner.n_actions, n_neighbors
        )
        next_context = random_context(
            rng, learner.s_dim, learner.n_actions, n_neighbors
        )
        target_attention = getattr(learner, "target_attention", None)
        batch.append(Transition(
            obs=context.own.s_part,
            action=int(rng.integers(learner.n_actions)),
            reward=float(rng.normal()),
            next_obs=next_context.own.s_part,
            nbr_inputs=inputs_from_context(context, mode, learner.attention),
            next_nbr_inputs=inputs_from_context(
                next_context, mode, target_attention
            ),
            done=index == size - 1,
            context=context if keep else None,
            next_context=next_context if keep else None,
        ))
    return batch


def q_loss_gradient_error(
    variant: AlgoVariant,
    seed: int,
    s_dim: int = 4,
    n_actions: int = 3
) -> float:
    """Ошибка градиента TD-потери по phi и параметрам внимания."""
    config = AlgoConfig(variant=variant, hidden=[6], embed_dim=3)
    learner = QLearner.create(variant, s_dim, config, seed, n_actions)
    batch = random_batch(learner, np.random.default_rng([seed, 7]))
    _, grads, attention_grads = learner.loss_and_grads(batch)

    def loss() -> float:
        return learner.loss_and_grads(batch)[0]

    params = learner.q_net.parameters()
    analytic = grads.parameters()
    if attention_grads is not None:
        params = params + [learner.attention.W, learner.attention.a]
        analytic = analytic + [attention_grads.W, attention_grads.a]
    numeric = numeric_gradient(loss, params)
    return relative_error(_flat(analytic), _flat(numeric))


def _actor_critic(variant: AlgoVariant, seed: int, s_dim: int,
                  n_actions: int) -> ACLearner:
    config = AlgoConfig(variant=variant, hidden=[6], embed_dim=3)
    return ACLearner.create(variant, s_dim, config, seed, n_actions)


def critic_gradient_error(
    variant: AlgoVariant,
    seed: int,
    s_dim: int = 4,
    n_actions: int = 3
) -> float:
    """Ошибка полуградиента критика (phi и внимание) при фиксированных y."""
    learner = _actor_critic(variant, seed, s_dim, n_actions)
    batch = random_batch(learner, np.random.default_rng([seed, 8]))
    targets = learner.critic_targets(batch)
    _, grads, attention_grads = learner.critic_loss_and_grads(batch, targets)

    def loss() -> float:
        return learner.critic_loss_and_grads(batch, targets)[0]

    params = learner.critic.parameters()
    analytic = grads.parameters()
    if attention_grads is not None:
        params = params + [learner.attention.W, learner.attention.a]
        analytic = analytic + [attention_grads.W, attention_grads.a]
    numeric = numeric_gradient(loss, params)
    return relative_error(_flat(analytic), _flat(numeric))


def actor_gradient_error(
    variant: AlgoVariant,
    seed: int,
    s_dim: int = 4,
    n_actions: int = 3
) -> float:
    """Ошибка градиента -mean log pi(a|x) Q(x, a) по theta."""
    learner = _actor_critic(variant, seed, s_dim, n_actions)
    batch = random_batch(learner, np.random.default_rng([seed, 9]))
    _, grads = learner.actor_loss_and_grads(batch)

    def loss() -> float:
        return learner.actor_loss_and_grads(batch)[0]

    numeric = numeric_gradient(loss, learner.actor.parameters())
    return relative_error(_flat(grads.parameters()), _flat(numeric))


def score_identity_error(
    seed: int,
    s_dim: int = 4,
    n_actions: int = 5
) -> float:
    """max |sum_a pi(a|x) grad log pi(a|x)| по всем параметрам актора."""
    learner = _actor_critic(AlgoVariant.AC, seed, s_dim, n_actions)
    x = np.random.default_rng([seed, 10]).normal(
        size=learner.actor.layer_dims[0]
    )
    probs = softmax(forward(learner.actor, x))
    total = sum(
        probs[a] * _flat(learner.score_gradient(x, a).parameters())
        for a in range(n_actions)
    )
    return float(np.max(np.abs(total)))
