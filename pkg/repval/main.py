"""Точка входа командной строки repval."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from repval import __version__
from repval.commands import (
    cmd_experiment,
    cmd_ledger,
    cmd_render,
    cmd_tournament,
    cmd_train,
    cmd_verify,
)
from repval.commands.verify import GRADIENT_CASES
from repval.config import load_config, parse_overrides
from repval.exceptions import ConfigurationError, RepvalError
from repval.models.enums import Scenario

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    """Парсер подкоманд repval (обучение, турнир, журнал, кадры, проверки).

    Нераспознанные пары --ключ значение становятся переопределениями
    конфигурации.
    """
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Файл конфигурации JSON"
    )
    common.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Число параллельных процессов (по умолчанию 1)"
    )
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Уровень журналирования"
    )

    parser = argparse.ArgumentParser(
        prog="repval",
        description="Мультиагентное обучение с представленной функцией "
                    "ценности: обучение, турнир, кадры, проверки",
        allow_abbrev=False,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "train",
        parents=[common],
        allow_abbrev=False,
        help="Самообучение варианта algo.variant"
    )

    tournament = sub.add_parser(
        "tournament",
        parents=[common],
        allow_abbrev=False,
        help="Турнир игроков из tournament.players"
    )
    tournament.add_argument(
        "--from-ledger",
        action="store_true",
        help="Пересчитать таблицы по журналу без новых матчей"
    )

    ledger = sub.add_parser(
        "ledger",
        parents=[common],
        allow_abbrev=False,
        help="Матчи турнира tournament.name из журнала"
    )
    ledger.add_argument("--id", type=int, default=None, help="ID матча")
    ledger.add_argument(
        "--player",
        default=None,
        help="Только матчи игрока"
    )
    ledger.add_argument("--skip", type=int, default=0, help="Пропустить")
    ledger.add_argument("--limit", type=int, default=20, help="Не больше")

    render = sub.add_parser(
        "render",
        parents=[common],
        allow_abbrev=False,
        help="Один матч с записью кадров"
    )
    render.add_argument(
        "player_a",
        help="Чекпоинт (без расширения) или random/stay/aggressor"
    )
    render.add_argument("player_b", help="Соперник армии B")
    render.add_argument(
        "--scenario",
        type=Scenario,
        default=Scenario.BATTLE,
        choices=list(Scenario),
        help="Сценарий"
    )
    render.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Зерно матча (по умолчанию env.seed)"
    )
    render.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Каталог кадров (по умолчанию paths.output_dir/frames)"
    )

    verify = sub.add_parser(
        "verify",
        parents=[common],
        allow_abbrev=False,
        help="Численные проверки"
    )
    verify.add_argument("--seed", type=int, default=0, help="Зерно")
    verify.add_argument(
        "--samples",
        type=int,
        default=10_000,
        help="Выборок на проверку разложения"
    )
    verify.add_argument(
        "--bound-factor",
        type=float,
        default=4.0,
        help="Множитель границы остатка"
    )
    verify.add_argument(
        "--gradient-cases",
        type=int,
        default=GRADIENT_CASES,
        help="Случайных сетей на проверку градиента"
    )

    experiment = sub.add_parser(
        "experiment",
        parents=[common],
        allow_abbrev=False,
        help="Обучение шести вариантов, серии и турниры по зёрнам"
    )
    experiment.add_argument(
        "--seeds",
        type=int,
        default=3,
        help="Число зёрен обучения и турниров"
    )
    experiment.add_argument(
        "--eval-games",
        type=int,
        default=100,
        help="Партий против случайного и необученного"
    )
    return parser


def run(args: argparse.Namespace, extra: List[str]) -> int:
    """Выполнение подкоманды."""
    if args.workers < 1:
        raise ConfigurationError(f"--workers должно быть >= 1: {args.workers}")
    if args.command == "verify":
        if extra:
            raise ConfigurationError(
                f"verify не принимает ключи конфигурации: {' '.join(extra)}"
            )
        if args.samples < 0:
            raise ConfigurationError(
                f"--samples должно быть >= 0: {args.samples}"
            )
        bounds_csv = load_config(args.config).paths.reports / "bounds.csv"
        if args.gradient_cases < 1:
            raise ConfigurationError(
                f"--gradient-cases должно быть >= 1: {args.gradient_cases}"
            )
        return cmd_verify(
            args.seed,
            args.samples,
            args.bound_factor,
            bounds_csv,
            gradient_cases=args.gradient_cases,
        )

    config = load_config(args.config, parse_overrides(extra))
    if args.command == "train":
        return cmd_train(config)
    if args.command == "tournament":
        return cmd_tournament(config, args.workers, args.from_ledger)
    if args.command == "ledger":
        return cmd_ledger(
            config,
            match_id=args.id,
            player=args.player,
            skip=args.skip,
            limit=args.limit,
        )
    if args.command == "experiment":
        return cmd_experiment(
            config,
            n_seeds=args.seeds,
            eval_games=args.eval_games,
            workers=args.workers,
        )
    out_dir = args.out if args.out is not None else config.paths.frames
    return cmd_render(
        config,
        args.player_a,
        args.player_b,
        args.scenario,
        config.env.seed if args.seed is None else args.seed,
        out_dir,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Запуск CLI; 0 при успехе, 1 при ошибке или проваленной проверке."""
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        return run(args, extra)
    except RepvalError as error:
        logger.debug("Ошибка выполнения", exc_info=True)
        print(f"Ошибка: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
