from fastapi import APIRouter, Depends

from src.cli.services import ExperimentService
from src.dependencies import get_experiment_service
from src.schemas import DistributionRequest, DistributionResponse

from .services import map_step_circuit

sawtooth_router = APIRouter(prefix="/sawtooth", tags=["Sawtooth map"])


@sawtooth_router.post("/distribution", response_model=DistributionResponse)
async def post_distribution(
    request: DistributionRequest,
    service: ExperimentService = Depends(get_experiment_service),
) -> DistributionResponse:
    """
    Evolve the action eigenstate |m0> for t map steps.

    Args:
        request: Map parameters, number of steps and evolution engine
        service: The experiment service dependency

    Returns:
        DistributionResponse: W_m over m = -N/2 .. N/2 - 1
    """
    params = request.params()
    dist = service.distribution(params, request.t, request.representation, request.engine)
    gates = 0
    if request.engine == "circuit":
        gates = map_step_circuit(params, request.representation).gate_count * request.t
    return DistributionResponse(
        m=dist.m.tolist(),
        W=dist.W.tolist(),
        peak=dist.peak,
        T=params.T,
        chaotic=params.is_chaotic,
        gate_count=gates,
    )
