"""
Schemas for noisy circuit execution.
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.statevec import StateVector


class Channel(StrEnum):
    """Single-qubit noise channels inserted after gates."""

    DEPHASE = "dephase"  # (1 - p) rho + p Z rho Z
    RELAX = "relax"  # amplitude damping with decay probability gamma


class NoiseMethod(StrEnum):
    DENSITY = "density"
    TRAJECTORIES = "trajectories"


class NoiseParams(BaseModel):
    """Per-gate noise strengths; ``inflation`` scales every strength uniformly."""

    model_config = ConfigDict(frozen=True)

    p_dephase: float = Field(default=0.0, ge=0, le=1, description="Phase-flip probability")
    p_relax: float = Field(default=0.0, ge=0, le=1, description="Amplitude-damping gamma")
    p_readout: float = Field(default=0.0, ge=0, le=1, description="Readout bit-flip probability")
    inflation: float = Field(
        default=1.0, ge=0, description="Multiplier for all strengths, results clipped at 1"
    )

    def effective(self) -> "NoiseParams":
        """Strengths after inflation, with inflation reset to 1."""
        return NoiseParams(
            p_dephase=min(1.0, self.p_dephase * self.inflation),
            p_relax=min(1.0, self.p_relax * self.inflation),
            p_readout=min(1.0, self.p_readout * self.inflation),
        )

    @property
    def is_noiseless(self) -> bool:
        eff = self.effective()
        return eff.p_dephase == 0.0 and eff.p_relax == 0.0 and eff.p_readout == 0.0


class DensityMatrix(BaseModel):
    """Mixed state of an n-qubit register, rows and columns indexed like StateVector."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_qubits: int = Field(..., ge=1)
    entries: np.ndarray

    @field_validator("entries", mode="before")
    def as_complex_array(cls, v):
        return np.ascontiguousarray(v, dtype=np.complex128)

    @model_validator(mode="after")
    def check_shape(self) -> "DensityMatrix":
        dim = 1 << self.n_qubits
        if self.entries.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {self.entries.shape}")
        return self

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        amps = state.amplitudes
        return cls(n_qubits=state.n_qubits, entries=np.outer(amps, amps.conj()))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def probabilities(self) -> np.ndarray:
        return np.clip(np.diagonal(self.entries).real, 0.0, None)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())

    def purity(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)

    def fidelity_with(self, state: StateVector) -> float:
        """<psi| rho |psi>."""
        return float(np.vdot(state.amplitudes, self.entries @ state.amplitudes).real)


class TrajectoryBatch(BaseModel):
    """Aggregated outcome statistics of a stochastic unravelling."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_qubits: int
    count: int = Field(..., ge=1, description="Number of trajectories")
    seeds: list[dict] = Field(..., description="Spawned seed of each block")
    block_size: int
    probabilities: np.ndarray = Field(..., description="Mean |<k|phi>|^2 over trajectories")
    probabilities_stderr: np.ndarray = Field(..., description="Standard error of the mean")
    fidelity: float | None = Field(default=None, description="Mean |<target|phi>|^2")
    fidelity_stderr: float | None = None


class LocalizationTable(BaseModel):
    """W_m after t noisy map steps in three regimes, m in increasing order."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: np.ndarray
    W_noiseless: np.ndarray
    W_noisy_exact: np.ndarray
    W_sampled_mean: np.ndarray
    W_sampled_std: np.ndarray
    shots: int
    repetitions: int
    seeds: list[dict] = Field(default_factory=list)
    method: NoiseMethod

    def rows(self) -> list[tuple]:
        return [
            (int(m), float(a), float(b), float(c), float(d))
            for m, a, b, c, d in zip(
                self.m,
                self.W_noiseless,
                self.W_noisy_exact,
                self.W_sampled_mean,
                self.W_sampled_std,
                strict=True,
            )
        ]

    def peak(self, column: str = "W_noisy_exact") -> float:
        """Value of ``column`` at the largest noiseless entry."""
        return float(getattr(self, column)[np.argmax(self.W_noiseless)])
