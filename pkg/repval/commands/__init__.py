"""Подкоманды CLI."""

from repval.commands.experiment import cmd_experiment
from repval.commands.ledger import cmd_ledger
from repval.commands.render import cmd_render
from repval.commands.tournament import cmd_tournament
from repval.commands.train import cmd_train
from repval.commands.verify import cmd_verify

__all__ = [
    "cmd_experiment",
    "cmd_ledger",
    "cmd_render",
    "cmd_tournament",
    "cmd_train",
    "cmd_verify",
]
