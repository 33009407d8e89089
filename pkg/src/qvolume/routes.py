from fastapi import APIRouter, Depends

from src.cli.services import ExperimentService
from src.dependencies import get_experiment_service

from .schemas import QVolumeInput, QVolumeReport

qvolume_router = APIRouter(prefix="/qvolume", tags=["Quantum volume"])


@qvolume_router.post("", response_model=QVolumeReport)
async def post_quantum_volume(
    spec: QVolumeInput,
    service: ExperimentService = Depends(get_experiment_service),
) -> QVolumeReport:
    """
    Quantum volume from a constant or tabulated effective error rate.

    Args:
        spec: Machine size n and eps_eff (one value or one per width)
        service: The experiment service dependency

    Returns:
        QVolumeReport: log2 V_Q, V_Q, the best width and the full table
    """
    return service.quantum_volume(spec)
