"""Загрузка конфигурации запуска.

Порядок приоритета: файл JSON < переменная REPVAL_SEED < ключи CLI.
Ключ CLI - путь через точку (--algo.beta 2) или имя листа, уникальное
среди разделов (--episodes 0).
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from repval.exceptions import ConfigurationError
from repval.schemas.config import GRID_PRESETS, RunConfig

logger = logging.getLogger(__name__)

SEED_ENV = "REPVAL_SEED"
SEED_SECTIONS = ("env", "train", "tournament")


def leaf_index() -> Dict[str, List[str]]:
    """Разделы, в которых встречается каждое имя листа."""
    index: Dict[str, List[str]] = {}
    for section, info in RunConfig.model_fields.items():
        model = info.annotation
        if isinstance(model, type) and issubclass(model, BaseModel):
            for leaf in model.model_fields:
                index.setdefault(leaf, []).append(section)
    return index


def parse_overrides(argv: Sequence[str]) -> List[Tuple[str, str]]:
    """Пары (ключ, значение) из ['--key', 'value', '--k2=v2', ...].

    Raises:
        ConfigurationError: Аргумент не похож на ключ или нет значения
    """
    pairs = []
    items = list(argv)
    while items:
        token = items.pop(0)
        if not token.startswith("--") or len(token) == 2:
            raise ConfigurationError(f"Неожиданный аргумент: {token}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        elif items and not items[0].startswith("--"):
            value = items.pop(0)
        else:
            raise ConfigurationError(f"Нет значения для ключа --{key}")
        pairs.append((key.replace("-", "_"), value))
    return pairs


def _parse_value(raw: str) -> Any:
    """Списки и объекты разбираются как JSON, остальное - строкой."""
    if raw and raw[0] in "[{":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as error:
            raise ConfigurationError(
                f"Некорректное значение {raw}: {error}"
            ) from error
    return raw


def resolve_key(key: str) -> List[str]:
    """Полный путь ключа CLI.

    Raises:
        ConfigurationError: Неизвестный или неоднозначный ключ
    """
    if "." in key:
        path = key.split(".")
        if path[0] not in RunConfig.model_fields:
            raise ConfigurationError(f"Неизвестный раздел в ключе {key}")
        return path
    sections = leaf_index().get(key)
    if not sections:
        raise ConfigurationError(f"Неизвестный ключ: {key}")
    if len(sections) > 1:
        options = ", ".join(f"{s}.{key}" for s in sections)
        raise ConfigurationError(
            f"Неоднозначный ключ {key}: укажите один из {options}"
        )
    return [sections[0], key]


def _set(data: Dict, path: List[str], value: Any) -> None:
    node = data
    for part in path[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigurationError(
                f"Ключ {'.'.join(path)} не указывает на раздел"
            )
        node = child
    node[path[-1]] = value


def _read_file(path: Path) -> Dict:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as error:
        raise ConfigurationError(
            f"Файл конфигурации не найден: {path}"
        ) from error
    except json.JSONDecodeError as error:
        raise ConfigurationError(
            f"Некорректный JSON в {path}: {error}"
        ) from error
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: ожидался объект JSON")
    return data


def _apply_preset(data: Dict) -> None:
    name = data.pop("preset", None)
    if name is None:
        return
    if name not in GRID_PRESETS:
        raise ConfigurationError(
            f"Неизвестный пресет {name}: доступны "
            f"{', '.join(sorted(GRID_PRESETS))}"
        )
    env = data.get("env", {})
    data["env"] = {**GRID_PRESETS[name].model_dump(), **env}


def _resolve_paths(config: RunConfig, base: Path) -> RunConfig:
    def resolve(path: Path) -> Path:
        return path if path.is_absolute() else base / path

    config.paths.output_dir = resolve(config.paths.output_dir)
    for player in config.tournament.players:
        if player.checkpoint is not None:
            player.checkpoint = resolve(player.checkpoint)
    return config


def load_config(
    path: Optional[Path] = None,
    overrides: Sequence[Tuple[str, str]] = (),
    env: Optional[Mapping[str, str]] = None
) -> RunConfig:
    """Конфигурация из файла, окружения и ключей CLI.

    Относительные пути разрешаются от каталога файла конфигурации.

    Args:
        path: Файл JSON (None - значения по умолчанию)
        overrides: Пары (ключ, значение) из командной строки
        env: Переменные окружения (по умолчанию os.environ)

    Returns:
        Проверенная конфигурация

    Raises:
        ConfigurationError: Файл отсутствует, ключ неизвестен или
            значение недопустимо; сообщение называет ключ
    """
    env = os.environ if env is None else env
    data = _read_file(path) if path is not None else {}
    _apply_preset(data)

    seed = env.get(SEED_ENV)
    if seed is not None:
        try:
            seed_value = int(seed)
        except ValueError as error:
            raise ConfigurationError(
                f"{SEED_ENV} должна быть целым числом: {seed}"
            ) from error
        for section in SEED_SECTIONS:
            _set(data, [section, "seed"], seed_value)

    for key, raw in overrides:
        _set(data, resolve_key(key), _parse_value(raw))

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as error:
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigurationError(
            f"Недопустимое значение {location}: {first['msg']}"
        ) from error

    base = path.parent if path is not None else Path.cwd()
    logger.debug("Конфигурация: %s", path or "значения по умолчанию")
    return _resolve_paths(config, base)
