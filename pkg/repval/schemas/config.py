"""Pydantic схемы конфигурации."""

from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from repval.models.enums import AlgoVariant, BuiltinPolicy, Scenario


class GridConfig(BaseModel):
    """Параметры сеточного мира.

    Атрибуты:
        width, height: Размер карты в клетках
        agents_per_team: Число агентов в каждой армии
        max_steps: Предел длины эпизода
        hp_max: Начальное здоровье
        attack_damage: Урон одной атаки
        view_radius: Полуширина окна наблюдения
        neighbor_radius: Радиус соседства (чебышёвский)
        seed: Зерно генератора
    """

    model_config = {"extra": "forbid"}

    width: int = Field(20, ge=4, description="Ширина карты")
    height: int = Field(20, ge=4, description="Высота карты")
    agents_per_team: int = Field(8, ge=1, description="Агентов в армии")
    max_steps: int = Field(100, ge=1, description="Предел шагов эпизода")
    hp_max: int = Field(10, ge=1, description="Максимальное здоровье")
    attack_damage: int = Field(2, ge=1, description="Урон атаки")
    view_radius: int = Field(3, ge=0, description="Радиус обзора")
    neighbor_radius: int = Field(6, ge=0, description="Радиус соседства")
    seed: int = Field(0, ge=0, description="Зерно генератора")

    @model_validator(mode="after")
    def check_capacity(self) -> "GridConfig":
        """Проверка, что обе армии помещаются на карту."""
        if 2 * self.agents_per_team > self.width * self.height:
            raise ValueError(
                "agents_per_team: две армии не помещаются на карту "
                f"{self.width}x{self.height}"
            )
        return self


GRID_PRESETS = {
    "desk": GridConfig(),
    "full": GridConfig(
        width=40,
        height=40,
        agents_per_team=64,
        max_steps=400,
    ),
}


class AlgoConfig(BaseModel):
    """Алгоритм и его гиперпараметры."""

    model_config = {"extra": "forbid"}

    variant: AlgoVariant = Field(
        AlgoVariant.RFAC,
        description="Обучаемый алгоритм"
    )
    beta: float = Field(1.0, ge=0.0, description="Обратная температура")
    gamma: float = Field(0.95, ge=0.0, lt=1.0, description="Дисконт")
    lr: float = Field(1e-3, ge=0.0, description="Шаг Q-сети")
    actor_lr: float = Field(1e-3, ge=0.0, description="Шаг актора")
    critic_lr: float = Field(1e-3, ge=0.0, description="Шаг критика")
    tau: float = Field(
        0.01,
        ge=0.0,
        le=1.0,
        description="Коэффициент мягкого обновления целевой сети"
    )
    buffer_capacity: int = Field(
        2 ** 16,
        ge=1,
        description="Ёмкость буфера воспроизведения"
    )
    batch_size: int = Field(64, ge=1, description="Размер батча")
    update_every: int = Field(
        5,
        ge=1,
        description="Шагов среды между обновлениями Q-сети"
    )
    hidden: List[int] = Field(
        default_factory=lambda: [64, 64],
        description="Размеры скрытых слоёв"
    )
    embed_dim: int = Field(16, ge=1, description="Размер эмбеддинга GAT")
    leaky_slope: float = Field(
        0.2,
        ge=0.0,
        description="Наклон LeakyReLU в GAT"
    )
    negative_sign: bool = Field(
        False,
        description="Буквальная формула exp(-beta*Q)"
    )
    backup: Literal["expected", "max"] = Field(
        "expected",
        description="Оценка v(s') в TD-цели"
    )
    advantage_baseline: bool = Field(
        False,
        description="Вычитать базовую линию в градиенте актора"
    )


class TrainConfig(BaseModel):
    """Параметры самообучения."""

    model_config = {"extra": "forbid"}

    episodes: int = Field(500, ge=0, description="Число эпизодов")
    checkpoint_every: int = Field(
        100,
        ge=1,
        description="Интервал чекпоинтов в эпизодах"
    )
    seed: int = Field(0, ge=0, description="Зерно обучения")
    scenario: Scenario = Field(
        Scenario.BATTLE,
        description="Сценарий обучения"
    )
    run_label: str = Field(
        "A",
        min_length=1,
        max_length=16,
        description="Метка независимого прогона"
    )


class PlayerSpec(BaseModel):
    """Описание игрока турнира."""

    model_config = {"extra": "forbid"}

    name: str = Field(..., min_length=1, description="Имя игрока")
    checkpoint: Optional[Path] = Field(
        None,
        description="Путь к чекпоинту (без расширения)"
    )
    builtin: Optional[BuiltinPolicy] = Field(
        None,
        description="Скриптовая политика вместо чекпоинта"
    )

    @model_validator(mode="after")
    def check_source(self) -> "PlayerSpec":
        """Ровно один источник политики."""
        if (self.checkpoint is None) == (self.builtin is None):
            raise ValueError(
                f"игрок {self.name}: нужен ровно один из checkpoint/builtin"
            )
        return self


class TournamentConfig(BaseModel):
    """Параметры турнира."""

    model_config = {"extra": "forbid"}

    name: str = Field("default", min_length=1, description="Метка турнира")
    players: List[PlayerSpec] = Field(
        default_factory=list,
        description="Игроки"
    )
    scenario: Scenario = Field(Scenario.BATTLE, description="Сценарий")
    n_games: int = Field(500, ge=0, description="Число партий")
    k_factor: float = Field(32.0, gt=0.0, description="Коэффициент K")
    initial_rating: float = Field(1200.0, description="Стартовый рейтинг")
    seed: int = Field(0, ge=0, description="Зерно расписания")

    @model_validator(mode="after")
    def check_unique_names(self) -> "TournamentConfig":
        """Имена игроков уникальны."""
        names = [player.name for player in self.players]
        if len(names) != len(set(names)):
            raise ValueError("players: имена игроков должны быть уникальны")
        return self


class PathsConfig(BaseModel):
    """Пути вывода."""

    model_config = {"extra": "forbid"}

    output_dir: Path = Field(Path("runs"), description="Каталог вывода")

    @property
    def checkpoints(self) -> Path:
        """Каталог чекпоинтов."""
        return self.output_dir / "checkpoints"

    @property
    def logs(self) -> Path:
        """Каталог журналов обучения."""
        return self.output_dir / "logs"

    @property
    def reports(self) -> Path:
        """Каталог отчётов турнира."""
        return self.output_dir / "reports"

    @property
    def frames(self) -> Path:
        """Каталог кадров."""
        return self.output_dir / "frames"


class RunConfig(BaseModel):
    """Полная конфигурация запуска."""

    model_config = {"extra": "forbid"}

    env: GridConfig = Field(default_factory=GridConfig)
    algo: AlgoConfig = Field(default_factory=AlgoConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    tournament: TournamentConfig = Field(default_factory=TournamentConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)
