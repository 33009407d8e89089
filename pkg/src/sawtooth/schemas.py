"""
Schemas for the sawtooth map.
"""

import math
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class Representation(StrEnum):
    """Basis the register is stored in: angle grid theta_i or action eigenstates."""

    THETA = "theta"
    ACTION = "action"


class SawtoothParams(BaseModel):
    """Quantum sawtooth map U = U_T U_k on N = 2^n levels (hbar = 1).

    U_k = exp(i k (theta - pi)^2 / 2) on theta_i = 2 pi i / N and
    U_T = exp(-i T m^2 / 2) over signed actions m in [-N/2, N/2).
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of qubits")
    k: float = Field(..., description="Kick strength")
    T: float = Field(..., description="Kick period")
    m0: int = Field(default=0, description="Initial action eigenvalue")

    @model_validator(mode="after")
    def check_values(self) -> "SawtoothParams":
        if not (math.isfinite(self.k) and math.isfinite(self.T)):
            raise ValueError("k and T must be finite")
        half = 1 << (self.n - 1)
        if not -half <= self.m0 < half:
            raise ValueError(f"m0 = {self.m0} outside [-{half}, {half})")
        return self

    @classmethod
    def from_classicality(cls, n: int, K: float, k: float, m0: int = 0) -> "SawtoothParams":
        """Build from K = kT and k."""
        if k == 0:
            raise ValueError("k must be non-zero to derive T from K")
        return cls(n=n, k=k, T=K / k, m0=m0)

    @computed_field
    @property
    def K(self) -> float:
        return self.k * self.T

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def is_chaotic(self) -> bool:
        return self.K < -4.0 or self.K > 0.0

    def perturbed(self, eps_k: float) -> "SawtoothParams":
        """Same map with kick strength k + eps_k."""
        return self.model_copy(update={"k": self.k + eps_k})


class SignedActionMap(BaseModel):
    """Bijection between register index i in [0, N) and signed action m in [-N/2, N/2)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)

    @property
    def N(self) -> int:
        return 1 << self.n

    def to_m(self, i: int) -> int:
        return i if i < self.N // 2 else i - self.N

    def to_index(self, m: int) -> int:
        if not -self.N // 2 <= m < self.N // 2:
            raise ValueError(f"action {m} outside [-{self.N // 2}, {self.N // 2})")
        return m % self.N

    def values(self) -> np.ndarray:
        """Signed m for every index, in index order."""
        i = np.arange(self.N)
        return np.where(i < self.N // 2, i, i - self.N)

    def ordered(self) -> np.ndarray:
        """Indices sorted by increasing m, i.e. m = -N/2 ... N/2 - 1."""
        return np.argsort(self.values(), kind="stable")


class ClassicalEnsemble(BaseModel):
    """Trajectories (I, theta) of the classical map, theta kept in [0, 2 pi)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    actions: np.ndarray = Field(..., description="Actions I")
    angles: np.ndarray = Field(..., description="Angles theta in [0, 2 pi)")
    seed: int = Field(..., description="Seed the angles were drawn with")

    @model_validator(mode="after")
    def check_shapes(self) -> "ClassicalEnsemble":
        if self.actions.shape != self.angles.shape:
            raise ValueError("actions and angles must have the same shape")
        return self

    @property
    def size(self) -> int:
        return int(self.actions.size)


class DiffusionFit(BaseModel):
    """Least-squares fit <(I - I0)^2> = D t through the origin."""

    D: float = Field(..., description="Diffusion coefficient")
    D_stderr: float = Field(..., description="Standard error of D")
    r_squared: float = Field(..., description="Coefficient of determination")
    times: list[int] = Field(..., description="Iteration numbers t = 0 .. t_max")
    second_moments: list[float] = Field(..., description="<(I - I0)^2> at each t")
    ensemble_size: int = Field(..., ge=1)
    seed: int
    chaotic: bool = Field(..., description="False when kT lies in [-4, 0]")
