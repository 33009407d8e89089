"""
Dependency injection setup for the HTTP routers.
"""

from src.cli.services import ExperimentService


def get_experiment_service() -> ExperimentService:
    return ExperimentService()
