"""Пакет repval: многоагентное обучение с представленной функцией ценности."""

__version__ = "1.0.0"
