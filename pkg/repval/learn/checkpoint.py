"""Чекпоинты обучаемых: бинарные блоки сетей и JSON-описание.

Файл <stem>.ckpt содержит блоки MLPCKPT и ATTNCKPT подряд в порядке
списка blocks из <stem>.json.
"""

import json
import logging
from pathlib import Path
from typing import BinaryIO, Dict, List, Tuple

import numpy as np
from pydantic import ValidationError

from repval.exceptions import CheckpointError
from repval.graph import AttentionParams
from repval.learn import AnyLearner, QLearner, create_learner
from repval.models.enums import AlgoVariant
from repval.nn import read_mlp, write_mlp
from repval.schemas.config import AlgoConfig

logger = logging.getLogger(__name__)

ATTN_MAGIC = "ATTNCKPT"
ATTN_VERSION = "v1"
_DTYPE = np.dtype("<f8")


def _with_ext(stem: Path, ext: str) -> Path:
    return stem.parent / (stem.name + ext)


def block_names(learner: AnyLearner) -> List[str]:
    """Имена сохраняемых блоков в порядке записи."""
    if isinstance(learner, QLearner):
        names = ["q_net", "target_net"]
        if learner.attention is not None:
            names += ["attention", "target_attention"]
    else:
        names = ["actor", "critic"]
        if learner.attention is not None:
            names.append("attention")
    return names


def write_attention(stream: BinaryIO, params: AttentionParams) -> None:
    """Блок ATTNCKPT: заголовок 'F,E', затем W и a в float64."""
    feature_dim, embed_dim = params.W.shape
    header = f"{ATTN_MAGIC} {ATTN_VERSION} {feature_dim},{embed_dim}\n"
    stream.write(header.encode("ascii"))
    stream.write(np.ascontiguousarray(params.W, dtype=_DTYPE).tobytes())
    stream.write(np.ascontiguousarray(params.a, dtype=_DTYPE).tobytes())


def read_attention(stream: BinaryIO, leaky_slope: float) -> AttentionParams:
    """Чтение блока ATTNCKPT.

    Raises:
        CheckpointError: Неверный заголовок или усечённые данные
    """
    header = stream.readline().decode("ascii", errors="replace").split()
    if len(header) != 3 or header[:2] != [ATTN_MAGIC, ATTN_VERSION]:
        raise CheckpointError(f"Неверный заголовок блока внимания: {header}")
    try:
        feature_dim, embed_dim = (int(d) for d in header[2].split(","))
    except ValueError as error:
        raise CheckpointError(
            f"Неверные размеры внимания: {header[2]}"
        ) from error
    W = _read(stream, feature_dim * embed_dim).reshape(feature_dim, embed_dim)
    a = _read(stream, 2 * embed_dim)
    return AttentionParams(W, a, leaky_slope)


def _read(stream: BinaryIO, count: int) -> np.ndarray:
    raw = stream.read(count * _DTYPE.itemsize)
    if len(raw) != count * _DTYPE.itemsize:
        raise CheckpointError("Усечённые данные блока внимания")
    return np.frombuffer(raw, dtype=_DTYPE).astype(float)


def save_learner(
    learner: AnyLearner,
    stem: Path,
    meta: Dict
) -> Tuple[Path, Path]:
    """Сохранение обучаемого в <stem>.ckpt и <stem>.json.

    Args:
        learner: Обучаемый
        stem: Путь без расширения
        meta: Дополнительные поля описания (env, seed, episode)

    Returns:
        Пути бинарного файла и описания
    """
    stem.parent.mkdir(parents=True, exist_ok=True)
    ckpt_path = _with_ext(stem, ".ckpt")
    json_path = _with_ext(stem, ".json")
    names = block_names(learner)
    with open(ckpt_path, "wb") as stream:
        for name in names:
            block = getattr(learner, name)
            if isinstance(block, AttentionParams):
                write_attention(stream, block)
            else:
                write_mlp(stream, block)

    sidecar = {
        **meta,
        "variant": learner.variant.value,
        "config": learner.config.model_copy(
            update={"variant": learner.variant}
        ).model_dump(mode="json"),
        "s_dim": learner.s_dim,
        "n_actions": learner.n_actions,
        "blocks": names,
    }
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True))
    logger.debug("Чекпоинт %s: блоки %s", ckpt_path, names)
    return ckpt_path, json_path


def read_meta(stem: Path) -> Dict:
    """JSON-описание чекпоинта.

    Raises:
        CheckpointError: Файл отсутствует или не JSON
    """
    json_path = _with_ext(stem, ".json")
    try:
        return json.loads(json_path.read_text())
    except FileNotFoundError as error:
        raise CheckpointError(
            f"Описание чекпоинта не найдено: {json_path}"
        ) from error
    except json.JSONDecodeError as error:
        raise CheckpointError(
            f"Повреждённое описание чекпоинта {json_path}: {error}"
        ) from error


def load_learner(stem: Path) -> Tuple[AnyLearner, Dict]:
    """Восстановление обучаемого по <stem>.ckpt и <stem>.json.

    Буфер воспроизведения не сохраняется и восстанавливается пустым.

    Raises:
        CheckpointError: Файлы отсутствуют, повреждены или не
            соответствуют варианту
    """
    meta = read_meta(stem)
    try:
        variant = AlgoVariant(meta["variant"])
        config = AlgoConfig.model_validate(meta["config"])
        s_dim = int(meta["s_dim"])
        n_actions = int(meta["n_actions"])
        names = list(meta["blocks"])
    except (KeyError, ValueError, TypeError, ValidationError) as error:
        raise CheckpointError(
            f"Некорректное описание чекпоинта {stem}: {error}"
        ) from error
    if config.variant is not variant:
        raise CheckpointError(
            f"Вариант {variant.value} не совпадает с конфигурацией "
            f"{config.variant.value}"
        )

    learner = create_learner(
        variant,
        s_dim,
        config,
        int(meta.get("seed", 0)),
        n_actions,
    )
    expected = block_names(learner)
    if names != expected:
        raise CheckpointError(
            f"Блоки {names} не соответствуют варианту {variant.value}: "
            f"ожидались {expected}"
        )

    ckpt_path = _with_ext(stem, ".ckpt")
    try:
        with open(ckpt_path, "rb") as stream:
            for name in names:
                fresh = getattr(learner, name)
                if isinstance(fresh, AttentionParams):
                    block = read_attention(stream, config.leaky_slope)
                    same = block.W.shape == fresh.W.shape
                else:
                    block = read_mlp(stream)
                    same = block.layer_dims == fresh.layer_dims
                if not same:
                    raise CheckpointError(
                        f"Размеры блока {name} не совпадают с описанием"
                    )
                setattr(learner, name, block)
            if stream.read(1):
                raise CheckpointError(f"Лишние данные в {ckpt_path}")
    except FileNotFoundError as error:
        raise CheckpointError(f"Чекпоинт не найден: {ckpt_path}") from error
    return learner, meta
