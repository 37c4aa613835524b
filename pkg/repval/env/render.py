"""Отрисовка кадров мира в ASCII и PPM (P6)."""

from enum import Enum

import numpy as np

from repval.env.world import GridWorld
from repval.models.enums import Team


class FrameFormat(str, Enum):
    """Форматы кадра."""

    ASCII = "ascii"
    PPM = "ppm"


def render(world: GridWorld, fmt: FrameFormat = FrameFormat.ASCII) -> bytes:
    """Кадр текущего состояния мира.

    ASCII: '.' пусто, 'a'/'A' армия A при hp не ниже/ниже половины,
    'b'/'B' армия B. PPM: пиксель на клетку, красный A, синий B,
    белый пусто, яркость пропорциональна hp/hp_max.
    """
    if fmt is FrameFormat.ASCII:
        return _render_ascii(world)
    return _render_ppm(world)


def _render_ascii(world: GridWorld) -> bytes:
    rows = []
    for y in range(world.height):
        chars = []
        for x in range(world.width):
            agent = world.agent_at(x, y)
            if agent is None:
                chars.append(".")
                continue
            letter = "a" if agent.team is Team.A else "b"
            if 2 * agent.hp < world.config.hp_max:
                letter = letter.upper()
            chars.append(letter)
        rows.append("".join(chars) + "\n")
    return "".join(rows).encode("ascii")


def _render_ppm(world: GridWorld) -> bytes:
    pixels = np.full((world.height, world.width, 3), 255, dtype=np.uint8)
    for agent_id in world.living_ids():
        agent = world.agents[agent_id]
        level = int(round(255 * agent.hp / world.config.hp_max))
        channel = 0 if agent.team is Team.A else 2
        x, y = agent.pos
        pixels[y, x] = 0
        pixels[y, x, channel] = level
    header = f"P6\n{world.width} {world.height}\n255\n".encode("ascii")
    return header + pixels.tobytes()
