"""Симулятор сражения на сетке."""

from repval.env.actions import N_ACTIONS, STAY, attack, move
from repval.env.observation import Observation, observe, observe_all
from repval.env.render import FrameFormat, render
from repval.env.world import (
    AgentState,
    GridWorld,
    StepOutcome,
    is_terminal,
    new_scenario,
    step,
)

__all__ = [
    "N_ACTIONS",
    "STAY",
    "attack",
    "move",
    "Observation",
    "observe",
    "observe_all",
    "FrameFormat",
    "render",
    "AgentState",
    "GridWorld",
    "StepOutcome",
    "is_terminal",
    "new_scenario",
    "step",
]
