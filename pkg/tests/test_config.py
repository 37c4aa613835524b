"""Тесты загрузки конфигурации."""
import json
from pathlib import Path

import pytest

from repval.config import load_config, parse_overrides, resolve_key
from repval.exceptions import ConfigurationError
from repval.models.enums import AlgoVariant, Scenario


@pytest.fixture
def config_file(tmp_path):
    """Фабрика файла конфигурации во временном каталоге."""
    def write(data: dict, name: str = "run.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path
    return write


class TestDefaults:
    """Тесты значений по умолчанию."""

    def test_defaults(self):
        """Тест конфигурации без файла."""
        config = load_config(env={})

        assert config.env.width == 20
        assert config.env.agents_per_team == 8
        assert config.algo.variant == AlgoVariant.RFAC
        assert config.tournament.k_factor == 32.0
        assert config.paths.output_dir == Path.cwd() / "runs"
        assert config.paths.reports == Path.cwd() / "runs" / "reports"


class TestFile:
    """Тесты чтения файла."""

    def test_load(self, config_file):
        """Тест значений из файла."""
        path = config_file({
            "algo": {"variant": "MFQ", "beta": 2.5},
            "train": {"episodes": 7},
        })

        config = load_config(path, env={})

        assert config.algo.variant == AlgoVariant.MFQ
        assert config.algo.beta == 2.5
        assert config.train.episodes == 7

    def test_preset(self, config_file):
        """Тест пресета карты с уточнением поля."""
        path = config_file({"preset": "full", "env": {"max_steps": 50}})

        config = load_config(path, env={})

        assert config.env.width == 40
        assert config.env.agents_per_team == 64
        assert config.env.max_steps == 50

    def test_unknown_preset(self, config_file):
        """Тест неизвестного пресета."""
        with pytest.raises(ConfigurationError, match="huge"):
            load_config(config_file({"preset": "huge"}), env={})

    def test_missing_file(self, tmp_path):
        """Тест сообщения об отсутствующем файле."""
        path = tmp_path / "absent.json"
        with pytest.raises(ConfigurationError, match="absent.json"):
            load_config(path, env={})

    def test_bad_json(self, tmp_path):
        """Тест некорректного JSON."""
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_config(path, env={})

    def test_unknown_field(self, config_file):
        """Тест лишнего поля в файле."""
        path = config_file({"algo": {"temperature": 1.0}})
        with pytest.raises(ConfigurationError, match="algo.temperature"):
            load_config(path, env={})

    def test_relative_paths(self, config_file, tmp_path):
        """Тест путей относительно файла конфигурации."""
        path = config_file({
            "paths": {"output_dir": "out"},
            "tournament": {"players": [
                {"name": "RFQ_A", "checkpoint": "ckpt/RFQ_A"},
                {"name": "random", "builtin": "random"},
            ]},
        })

        config = load_config(path, env={})

        assert config.paths.output_dir == tmp_path / "out"
        assert config.tournament.players[0].checkpoint == (
            tmp_path / "ckpt" / "RFQ_A"
        )
        assert config.tournament.players[1].checkpoint is None


class TestOverrides:
    """Тесты ключей командной строки."""

    def test_dotted_key(self):
        """Тест полного пути ключа."""
        config = load_config(overrides=[("algo.beta", "3")], env={})
        assert config.algo.beta == 3.0

    def test_leaf_key(self):
        """Тест уникального имени листа."""
        config = load_config(
            overrides=[("episodes", "0"), ("variant", "IL")], env={}
        )

        assert config.train.episodes == 0
        assert config.algo.variant == AlgoVariant.IL

    def test_list_value(self):
        """Тест значения-списка в JSON."""
        config = load_config(overrides=[("hidden", "[8, 4]")], env={})
        assert config.algo.hidden == [8, 4]

    def test_ambiguous_key(self):
        """Тест неоднозначного ключа seed."""
        with pytest.raises(ConfigurationError, match="env.seed"):
            resolve_key("seed")

    def test_unknown_key(self):
        """Тест неизвестного ключа."""
        with pytest.raises(ConfigurationError, match="temperature"):
            load_config(overrides=[("temperature", "1")], env={})
        with pytest.raises(ConfigurationError):
            load_config(overrides=[("nosection.beta", "1")], env={})

    def test_invalid_value_names_key(self):
        """Тест сообщения о недопустимом значении."""
        with pytest.raises(ConfigurationError, match="algo.gamma"):
            load_config(overrides=[("algo.gamma", "1.5")], env={})

    def test_override_beats_file(self, config_file):
        """Тест приоритета ключа над файлом."""
        path = config_file({"train": {"scenario": "battle"}})

        config = load_config(path, [("train.scenario", "wildwar")], env={})

        assert config.train.scenario == Scenario.WILD_WAR

    def test_parse_overrides(self):
        """Тест обеих форм ключа."""
        pairs = parse_overrides(["--algo.beta", "2", "--n-games=10"])
        assert pairs == [("algo.beta", "2"), ("n_games", "10")]

    def test_parse_overrides_errors(self):
        """Тест ключа без значения и лишнего аргумента."""
        with pytest.raises(ConfigurationError):
            parse_overrides(["--episodes"])
        with pytest.raises(ConfigurationError):
            parse_overrides(["episodes", "3"])


class TestSeedEnvironment:
    """Тесты переменной REPVAL_SEED."""

    def test_seed_applies_to_sections(self):
        """Тест зерна во всех разделах."""
        config = load_config(env={"REPVAL_SEED": "9"})

        assert config.env.seed == 9
        assert config.train.seed == 9
        assert config.tournament.seed == 9

    def test_override_beats_environment(self):
        """Тест приоритета ключа над переменной."""
        config = load_config(
            overrides=[("train.seed", "3")], env={"REPVAL_SEED": "9"}
        )

        assert config.train.seed == 3
        assert config.env.seed == 9

    def test_invalid_seed(self):
        """Тест нечислового зерна."""
        with pytest.raises(ConfigurationError, match="REPVAL_SEED"):
            load_config(env={"REPVAL_SEED": "abc"})
