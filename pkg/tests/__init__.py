"""Тесты для менеджера задач."""
