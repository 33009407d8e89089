from typing import Literal

from pydantic import BaseModel, Field

from src.cli.schemas import MapConfig


class CircuitQuery(MapConfig):
    """Query parameters selecting a map-step circuit."""

    lowered: bool = Field(False, description="Lower to {H, P, CNOT} before dumping")


class CircuitResponse(BaseModel):
    """Gate counts and text dump of a circuit."""

    label: str = Field(..., description="Circuit label")
    n_qubits: int = Field(..., description="Register width")
    gate_count: int = Field(..., description="Counted gates")
    counts: dict[str, int] = Field(..., description="Gates per kind")
    elementary_count: int = Field(..., description="Cost in elementary gates")
    text: str = Field(..., description="Line-oriented circuit dump")


class DistributionRequest(MapConfig):
    t: int = Field(1, ge=0, le=100_000, description="Map steps")
    engine: Literal["circuit", "reference"] = Field(
        "circuit", description="Gate-level circuit or FFT reference evolution"
    )


class DistributionResponse(BaseModel):
    """W_m after t map steps, m in increasing order."""

    m: list[int] = Field(..., description="Signed actions")
    W: list[float] = Field(..., description="Probability of each action")
    peak: int = Field(..., description="Action with the largest probability")
    T: float = Field(..., description="Kick period derived from kT and k")
    chaotic: bool = Field(..., description="False when kT lies in [-4, 0]")
    gate_count: int = Field(..., description="Gates executed (0 for the reference engine)")


class APIInfoResponse(BaseModel):
    """Response for root endpoint providing API information."""

    message: str = Field(..., description="Welcome message")
    description: str = Field(..., description="API description")
    version: str = Field(..., description="API version")
    endpoints: dict[str, str] = Field(..., description="Available API endpoints")


class HealthCheckResponse(BaseModel):
    """Response for health check endpoint."""

    status: str = Field(..., description="Health status")
    service: str = Field(..., description="Service name")
    version: str = Field(..., description="Service version")
