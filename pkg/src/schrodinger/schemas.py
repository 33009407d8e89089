"""
Schemas for split-operator Schrödinger evolution on a qubit register.
"""

from collections.abc import Callable
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.statevec import StateVector

PotentialFunction = Callable[[np.ndarray, float], np.ndarray]


class PotentialMethod(StrEnum):
    """How the potential phase exp(-i V eps / hbar) is applied."""

    ANCILLA = "ancilla"  # tabulated V on an m-bit ancilla register
    STRUCTURED = "structured"  # n^2 diagonal gates, quadratic V only
    EXACT = "exact"  # direct diagonal multiplication


class SpatialGrid(BaseModel):
    """2^n cell centres x_i = -d + (i + 1/2) delta on [-d, d]."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of qubits")
    d: float = Field(..., gt=0, description="Half-width of the domain")

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def delta(self) -> float:
        return 2.0 * self.d / self.size

    def points(self) -> np.ndarray:
        return -self.d + (np.arange(self.size) + 0.5) * self.delta

    def momenta(self) -> np.ndarray:
        """Wave number pi m / d for the signed index m of each register slot."""
        return np.fft.fftfreq(self.size) * self.size * np.pi / self.d


class QuadraticPotential(BaseModel):
    """V(x) = a x^2 + b x + c."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(default=0.0, description="Quadratic coefficient")
    b: float = Field(default=0.0, description="Linear coefficient")
    c: float = Field(default=0.0, description="Constant offset")

    @classmethod
    def harmonic(cls, omega: float = 1.0, mass: float = 1.0) -> "QuadraticPotential":
        return cls(a=0.5 * mass * omega**2)

    @classmethod
    def linear(cls, force: float) -> "QuadraticPotential":
        """Uniform force F, V = -F x."""
        return cls(b=-force)

    def __call__(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self.a * x**2 + self.b * x + self.c


class EvolutionSettings(BaseModel):
    """Trotter step settings; hbar and mass default to 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    epsilon: float = Field(..., gt=0, description="Time step")
    steps: int = Field(default=1, ge=0, description="Number of Trotter steps l")
    mass: float = Field(default=1.0, gt=0, description="Particle mass")
    hbar: float = Field(default=1.0, gt=0, description="Reduced Planck constant")
    potential: QuadraticPotential | PotentialFunction | None = Field(
        default=None, description="V(x, t); None means a free particle"
    )
    time_dependent: bool = Field(
        default=False, description="Resample V at the start of every step"
    )
    method: PotentialMethod = Field(default=PotentialMethod.ANCILLA)
    ancilla_bits: int = Field(default=16, ge=1, description="Ancilla resolution m")
    potential_scale: float | None = Field(
        default=None,
        gt=0,
        description="Fixed energy per ancilla unit; None rescales V to the full range",
    )
    snapshot_every: int | None = Field(
        default=None, ge=1, description="Record the state every this many steps"
    )

    def potential_values(self, x: np.ndarray, t: float) -> np.ndarray:
        if self.potential is None:
            return np.zeros_like(x)
        return np.broadcast_to(np.asarray(self.potential(x, t), dtype=float), x.shape)


class DiscretizedWavefunction(BaseModel):
    """Grid samples psi(x_i) / norm_factor held as a register state."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: SpatialGrid
    state: StateVector
    norm_factor: float = Field(..., gt=0, description="sqrt(sum |psi(x_i)|^2)")
    time: float = Field(default=0.0, description="Physical time of the state")
    gate_counts: dict[str, int] = Field(
        default_factory=dict, description="Gates executed to reach this state"
    )
    snapshots: list[tuple[float, np.ndarray]] = Field(default_factory=list)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.state.amplitudes

    def density(self) -> np.ndarray:
        """|psi(x)|^2 normalized as a density on the grid (integrates to 1)."""
        return np.abs(self.state.amplitudes) ** 2 / self.grid.delta

    def mean_position(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2 * self.grid.points()))

    def position_spread(self) -> float:
        probs = np.abs(self.amplitudes) ** 2
        x = self.grid.points()
        mean = np.sum(probs * x)
        return float(np.sqrt(np.sum(probs * (x - mean) ** 2)))
