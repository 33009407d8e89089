from typing import Annotated

from fastapi import APIRouter, Query

from src.sawtooth import map_step_circuit
from src.schemas import CircuitQuery, CircuitResponse

from .builders import lower_to_universal, qft_circuit
from .schemas import Circuit
from .serialization import dumps

circuits_router = APIRouter(prefix="/circuits", tags=["Circuits"])


def _response(circuit: Circuit) -> CircuitResponse:
    return CircuitResponse(
        label=circuit.label,
        n_qubits=circuit.n_qubits,
        gate_count=circuit.gate_count,
        counts=circuit.counts,
        elementary_count=circuit.elementary_count,
        text=dumps(circuit),
    )


@circuits_router.get("/map-step", response_model=CircuitResponse)
async def get_map_step(query: Annotated[CircuitQuery, Query()]) -> CircuitResponse:
    """
    One period of the quantum sawtooth map as a gate list.

    Args:
        query: Map parameters (n, kT, k), register basis and lowering flag

    Returns:
        CircuitResponse: Gate counts (3n^2 + n) and the text dump
    """
    circuit = map_step_circuit(query.params(), query.representation)
    if query.lowered:
        circuit = lower_to_universal(circuit)
    return _response(circuit)


@circuits_router.get("/qft", response_model=CircuitResponse)
async def get_qft(
    n: Annotated[int, Query(ge=1, le=24, description="Number of qubits")],
    lowered: bool = False,
) -> CircuitResponse:
    """
    Quantum Fourier transform on n qubits.

    Args:
        n: Register width
        lowered: Lower the controlled phases to {H, P, CNOT}

    Returns:
        CircuitResponse: Gate counts (n(n+1)/2 before lowering) and the text dump
    """
    circuit = qft_circuit(n)
    if lowered:
        circuit = lower_to_universal(circuit)
    return _response(circuit)
