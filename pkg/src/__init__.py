from .config import settings
from .exceptions import (
    CapacityError,
    ConfigError,
    DomainError,
    FitError,
    NotLocalizedError,
    NumericalError,
    SimulationError,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "DomainError",
    "FitError",
    "NotLocalizedError",
    "NumericalError",
    "SimulationError",
    "settings",
]
