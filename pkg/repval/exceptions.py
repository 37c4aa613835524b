"""Исключения пакета repval."""


class RepvalError(Exception):
    """Базовая ошибка пакета."""


class ConfigurationError(RepvalError):
    """Некорректная конфигурация (ключ, значение или размещение)."""


class ContractViolation(RepvalError):
    """Нарушение предусловия операции."""


class NumericalError(RepvalError):
    """Нечисловые значения в параметрах, градиентах или потерях."""


class CheckpointError(RepvalError):
    """Чекпоинт отсутствует, повреждён или не соответствует варианту."""


class NotFoundError(RepvalError):
    """Запись журнала не найдена."""
