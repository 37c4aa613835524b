"""CRUD операции."""

from repval.crud.match import MatchCRUD

__all__ = ["MatchCRUD"]
