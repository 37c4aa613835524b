"""Конфигурация базы данных журнала матчей."""

from pathlib import Path
from typing import Union

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

# Имя файла журнала в каталоге отчётов
LEDGER_NAME = "matches.db"

# Базовый класс для моделей
Base = declarative_base()


def ledger_url(reports_dir: Union[str, Path]) -> str:
    """URL SQLite журнала в каталоге отчётов."""
    return f"sqlite:///{Path(reports_dir) / LEDGER_NAME}"


def create_session_factory(url: str) -> sessionmaker:
    """Движок, таблицы и фабрика сессий для URL базы данных."""
    engine = create_engine(
        url,
        connect_args={"check_same_thread": False}
    )
    Base.metadata.create_all(bind=engine)
    return sessionmaker(
        autocommit=False,
        autoflush=False,
        bind=engine
    )


def get_db(session_factory: sessionmaker):
    """Генератор для получения сессии базы данных."""
    db = session_factory()
    try:
        yield db
    finally:
        db.close()
