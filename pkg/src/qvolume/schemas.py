"""
Schemas for the quantum-volume metric and the effective error-rate estimator.
"""

from pydantic import BaseModel, Field, model_validator


class QVolumeInput(BaseModel):
    """Machine size and its effective error rate per register width kappa.

    ``eps_eff`` is either one rate for every kappa or a table whose entry
    kappa - 1 belongs to width kappa.
    """

    n: int = Field(..., ge=1, description="Machine qubit count")
    eps_eff: float | list[float] = Field(..., description="Effective error rate(s)")

    @model_validator(mode="after")
    def check_table(self) -> "QVolumeInput":
        if isinstance(self.eps_eff, list) and len(self.eps_eff) != self.n:
            raise ValueError(
                f"tabulated eps_eff needs {self.n} entries, got {len(self.eps_eff)}"
            )
        return self

    def eps(self, kappa: int) -> float:
        if isinstance(self.eps_eff, list):
            return self.eps_eff[kappa - 1]
        return self.eps_eff


class QVolumeRow(BaseModel):
    kappa: int
    eps_eff: float
    depth: float = Field(..., description="d(kappa) = 1 / (kappa eps_eff)")
    achievable: float = Field(..., description="min(kappa, d(kappa))")


class QVolumeReport(BaseModel):
    log2_VQ: int = Field(..., ge=0)
    VQ: int = Field(..., ge=1)
    best_kappa: int
    table: list[QVolumeRow]


class EpsEffEstimate(BaseModel):
    """Fit F(g) = A (1 - eps)^g of the mean state fidelity over gate count g."""

    kappa: int
    eps: float
    ci_low: float
    ci_high: float
    stderr: float = Field(..., description="Standard error of the fitted log-slope")
    amplitude: float = Field(..., description="Fitted A")
    r_squared: float
    gate_counts: list[int]
    fidelities: list[float]
    sequences: int
    seed: int
