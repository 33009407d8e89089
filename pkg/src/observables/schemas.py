"""
Schemas for quantities extracted from evolved states.
"""

from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.sawtooth import Representation, SignedActionMap
from src.sawtooth.services import theta_grid


class ActionDistribution(BaseModel):
    """W_m = |<m|psi>|^2 over m = -N/2 .. N/2 - 1 (increasing)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: np.ndarray = Field(..., description="Signed actions in increasing order")
    W: np.ndarray = Field(..., description="Probability of each action")
    m0: int = Field(default=0, description="Reference action")

    @model_validator(mode="after")
    def check_shape(self) -> "ActionDistribution":
        if self.m.shape != self.W.shape:
            raise ValueError("m and W must have the same shape")
        return self

    def probability(self, m: int) -> float:
        return float(self.W[m + self.m.size // 2])

    @property
    def peak(self) -> int:
        return int(self.m[np.argmax(self.W)])


class LocalizationFit(BaseModel):
    """ln W_m = ln A - 2 |m - m0| / l over the points above the floor."""

    length: float = Field(..., gt=0, description="Localization length l")
    r_squared: float = Field(..., description="Fit quality")
    support: tuple[int, int] = Field(..., description="Smallest and largest m used")
    points: int = Field(..., description="Number of points in the fit")
    slope_stderr: float = Field(..., description="Standard error of the fitted slope")


class HusimiSpec(BaseModel):
    """Phase-space grid over [0, 2 pi) x [-N/2, N/2)."""

    n_theta: int = Field(default=64, ge=1, description="Angle cells")
    n_action: int = Field(default=64, ge=1, description="Action cells")
    sigma_action: float | None = Field(
        default=None, gt=0, description="Action width; default sqrt(N / 4 pi)"
    )


class HusimiGrid(BaseModel):
    """Coherent-state quasi-probability; values[j, k] sits at (theta[j], actions[k])."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray
    theta: np.ndarray
    actions: np.ndarray
    sigma_theta: float
    sigma_action: float
    coarse: bool = Field(
        default=False, description="Set when the grid has fewer cells than N"
    )

    @property
    def cell_area(self) -> float:
        return float((2.0 * np.pi / self.theta.size) * (self.actions[1] - self.actions[0]))

    def metadata(self) -> dict:
        return {
            "n_theta": int(self.theta.size),
            "n_action": int(self.actions.size),
            "sigma_theta": self.sigma_theta,
            "sigma_action": self.sigma_action,
            "coarse": self.coarse,
        }


class RamseyResult(BaseModel):
    """Ancilla polarisations after H, controlled-W, H.

    ``sigma_y`` is reported as Im<psi|W|psi>, so W = exp(i phi) yields
    (cos phi, sin phi); this is minus the expectation of the usual Pauli-y.
    """

    sigma_z: float
    sigma_y: float
    fidelity: float
    shots: int | None = None
    sampled_sigma_z: float | None = None
    sampled_sigma_y: float | None = None
    sampled_fidelity: float | None = None


class DiagonalObservable(BaseModel):
    """Operator diagonal in the angle or the action basis.

    ``values[i]`` belongs to register index i: theta_i = 2 pi i / N in the
    angle basis, signed m(i) in the action basis.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    basis: Representation
    values: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "DiagonalObservable":
        return cls(basis=Representation.THETA, values=np.ones(1 << n, dtype=complex))

    @classmethod
    def of_theta(cls, n: int, f: Callable[[np.ndarray], np.ndarray]) -> "DiagonalObservable":
        return cls(
            basis=Representation.THETA,
            values=_sample(f, theta_grid(n)),
        )

    @classmethod
    def of_action(cls, n: int, f: Callable[[np.ndarray], np.ndarray]) -> "DiagonalObservable":
        m = SignedActionMap(n=n).values()
        return cls(basis=Representation.ACTION, values=_sample(f, m))


def _sample(f: Callable[[np.ndarray], np.ndarray], grid: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(grid), dtype=complex), grid.shape).copy()
