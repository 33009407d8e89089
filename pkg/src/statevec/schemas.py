"""
Schemas for state-vector simulation.
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PauliAxis(StrEnum):
    """Measurement axis for single-qubit Pauli expectations."""

    X = "x"
    Y = "y"
    Z = "z"


class BasisIndex(BaseModel):
    """Computational basis label k = sum_j k_j 2^j, qubit 0 least significant."""

    model_config = ConfigDict(frozen=True)

    value: int = Field(..., ge=0, description="Integer label of the basis state")
    n_qubits: int = Field(..., ge=1, description="Register width")

    @model_validator(mode="after")
    def check_range(self) -> "BasisIndex":
        if self.value >= 1 << self.n_qubits:
            raise ValueError(
                f"basis index {self.value} does not fit in {self.n_qubits} qubits"
            )
        return self

    @property
    def bits(self) -> tuple[int, ...]:
        """Binary digits (k_0, k_1, ..., k_{n-1})."""
        return tuple((self.value >> j) & 1 for j in range(self.n_qubits))

    @classmethod
    def from_bits(cls, bits: list[int] | tuple[int, ...]) -> "BasisIndex":
        value = sum(int(b) << j for j, b in enumerate(bits))
        return cls(value=value, n_qubits=len(bits))

    def bitstring(self) -> str:
        """Bit string k_{n-1}...k_0 as written in kets."""
        return format(self.value, f"0{self.n_qubits}b")


class StateVector(BaseModel):
    """Pure state of an n-qubit register: 2^n complex amplitudes.

    Gate kernels mutate ``amplitudes`` in place; normalization is checked,
    never silently restored.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_qubits: int = Field(..., ge=1, description="Register width")
    amplitudes: np.ndarray = Field(..., description="Complex amplitudes c_k")

    @field_validator("amplitudes", mode="before")
    def as_complex_array(cls, v):
        return np.ascontiguousarray(v, dtype=np.complex128)

    @model_validator(mode="after")
    def check_shape(self) -> "StateVector":
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )
        return self

    @property
    def dimension(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(n_qubits=self.n_qubits, amplitudes=self.amplitudes.copy())


class MeasurementRecord(BaseModel):
    """Outcome counts of repeated computational-basis measurements."""

    n_qubits: int = Field(..., ge=1)
    shots: int = Field(..., ge=1, description="Number of measurements")
    counts: dict[int, int] = Field(..., description="Basis index -> occurrences")
    seed: int = Field(..., description="Seed of the sampling stream")

    @model_validator(mode="after")
    def check_counts(self) -> "MeasurementRecord":
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be non-negative")
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not add up to shots")
        return self

    def frequencies(self) -> np.ndarray:
        freq = np.zeros(1 << self.n_qubits)
        for k, c in self.counts.items():
            freq[k] = c
        return freq / self.shots
