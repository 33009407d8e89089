from .app import app
from .schemas import (
    ExperimentConfig,
    Subcommand,
    ValidatedConfig,
    validate_config,
)
from .services import ExperimentResult, ExperimentService

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ExperimentService",
    "Subcommand",
    "ValidatedConfig",
    "app",
    "validate_config",
]
