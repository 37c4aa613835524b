"""Команда render: один матч с покадровой записью."""

from pathlib import Path
from typing import List

from repval.env.render import FrameFormat, render
from repval.env.world import GridWorld
from repval.models.enums import BuiltinPolicy, Scenario
from repval.schemas.config import PlayerSpec, RunConfig
from repval.tourney.match import play_match
from repval.tourney.policies import load_player

BUILTIN_NAMES = {policy.value for policy in BuiltinPolicy}


def spec_from_arg(arg: str, side: str) -> PlayerSpec:
    """Игрок из аргумента: имя скрипта или путь чекпоинта без расширения."""
    if arg in BUILTIN_NAMES:
        return PlayerSpec(name=f"{side}:{arg}", builtin=BuiltinPolicy(arg))
    return PlayerSpec(name=f"{side}:{Path(arg).name}", checkpoint=Path(arg))


def cmd_render(
    config: RunConfig,
    player_a: str,
    player_b: str,
    scenario: Scenario,
    seed: int,
    out_dir: Path
) -> int:
    """Матч player_a против player_b с кадрами frame_NNNN.ppm и ascii.txt.

    Кадров на один больше, чем шагов: начальный кадр включён.

    Returns:
        Код завершения
    """
    a = load_player(spec_from_arg(player_a, "A"))
    b = load_player(spec_from_arg(player_b, "B"))
    out_dir.mkdir(parents=True, exist_ok=True)
    transcript: List[bytes] = []

    def on_frame(world: GridWorld) -> None:
        index = world.step_count
        frame_path = out_dir / f"frame_{index:04d}.ppm"
        frame_path.write_bytes(render(world, FrameFormat.PPM))
        transcript.append(f"step {index}\n".encode("ascii"))
        transcript.append(render(world, FrameFormat.ASCII))

    result = play_match(a, b, scenario, config.env, seed, on_frame=on_frame)
    (out_dir / "ascii.txt").write_bytes(b"".join(transcript))
    print(
        f"{result.player_a} против {result.player_b}: "
        f"победитель {result.winner.value}, шагов {result.steps}, "
        f"кадров {result.steps + 1} в {out_dir}"
    )
    return 0
