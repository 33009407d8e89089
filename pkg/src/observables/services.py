"""
Action distributions, localization fits and dynamical correlation functions.
"""

import logging
from typing import Literal

import numpy as np
from scipy.stats import linregress

from src.config import settings
from src.exceptions import DomainError, FitError, NotLocalizedError
from src.sawtooth import Representation, SawtoothParams, SignedActionMap
from src.sawtooth.services import action_probabilities, evolve_quantum, evolve_reference
from src.statevec import StateVector

from .schemas import ActionDistribution, DiagonalObservable, LocalizationFit

logger = logging.getLogger(__name__)

Engine = Literal["circuit", "reference"]


def action_distribution(
    state: StateVector,
    m0: int = 0,
    representation: Representation = Representation.THETA,
) -> ActionDistribution:
    """W_m = |<m|psi>|^2 for m = -N/2 .. N/2 - 1."""
    amap = SignedActionMap(n=state.n_qubits)
    order = amap.ordered()
    W = action_probabilities(state, representation)
    return ActionDistribution(m=amap.values()[order], W=W[order], m0=m0)


def fit_localization_length(
    dist: ActionDistribution, floor: float | None = None, window: float | None = None
) -> LocalizationFit:
    """Least-squares fit of ln W_m against |m - m0| above ``floor``.

    ``window`` keeps only |m - m0| <= window, the exponential core of a
    distribution whose far tail decays as a power law.

    Raises FitError with fewer than four usable points and NotLocalizedError
    when the fitted slope is not negative.
    """
    floor = settings.LOCALIZATION_FLOOR if floor is None else floor
    if window is not None and window <= 0:
        raise DomainError(f"fit window must be positive, got {window}")
    mask = dist.W > floor
    if window is not None:
        mask &= np.abs(dist.m - dist.m0) <= window
    points = int(np.count_nonzero(mask))
    if points < 4:
        raise FitError(f"only {points} points above the floor {floor:g}, need 4")
    distance = np.abs(dist.m[mask] - dist.m0).astype(float)
    if np.ptp(distance) == 0.0:
        raise FitError("all usable points lie at the same distance from m0")
    fit = linregress(distance, np.log(dist.W[mask]))
    if fit.slope > -1e-12:
        raise NotLocalizedError(
            f"ln W_m does not decay with |m - m0| (slope {fit.slope:.3g})"
        )
    used = dist.m[mask]
    result = LocalizationFit(
        length=-2.0 / fit.slope,
        r_squared=fit.rvalue**2,
        support=(int(used.min()), int(used.max())),
        points=points,
        slope_stderr=fit.stderr,
    )
    logger.debug(f"Localization fit: l={result.length:.4g}, R^2={result.r_squared:.4f}")
    return result


def second_moment(dist: ActionDistribution) -> float:
    """Variance sum_m W_m (m - <m>)^2."""
    m = dist.m.astype(float)
    mean = np.sum(dist.W * m)
    return float(np.sum(dist.W * (m - mean) ** 2))


def mean_distribution(distributions: list[ActionDistribution]) -> ActionDistribution:
    """Pointwise average of distributions over the same action range."""
    if not distributions:
        raise DomainError("cannot average an empty list of distributions")
    first = distributions[0]
    W = np.mean([d.W for d in distributions], axis=0)
    return ActionDistribution(m=first.m.copy(), W=W, m0=first.m0)


def _to_basis(
    amps: np.ndarray, source: Representation, target: Representation
) -> np.ndarray:
    if source is target:
        return amps
    if source is Representation.THETA:
        return np.fft.fft(amps, norm="ortho")
    return np.fft.ifft(amps, norm="ortho")


def apply_observable(
    state: StateVector,
    observable: DiagonalObservable,
    representation: Representation = Representation.THETA,
) -> StateVector:
    """Return observable |psi> for a state held in ``representation``."""
    if not isinstance(observable, DiagonalObservable):
        raise DomainError(f"unsupported observable {type(observable).__name__}")
    if observable.values.shape != (state.dimension,):
        raise DomainError(
            f"observable has {observable.values.size} entries, state has {state.dimension}"
        )
    representation = Representation(representation)
    amps = _to_basis(state.amplitudes, representation, observable.basis)
    amps = observable.values * amps
    amps = _to_basis(amps, observable.basis, representation)
    return StateVector(n_qubits=state.n_qubits, amplitudes=amps)


def evolve_map(
    state: StateVector,
    params: SawtoothParams,
    t: int,
    representation: Representation,
    engine: Engine,
) -> StateVector:
    if engine == "circuit":
        return evolve_quantum(state, params, t, representation)
    return evolve_reference(state, params, t, representation)


def correlation_function(
    psi0: StateVector,
    A: DiagonalObservable,
    B: DiagonalObservable,
    params: SawtoothParams,
    t: int,
    representation: Representation = Representation.THETA,
    engine: Engine = "circuit",
) -> complex:
    """<psi0| (U^dagger)^t A^dagger U^t B |psi0> = <A U^t psi0 | U^t B psi0>."""
    left = evolve_map(psi0.copy(), params, t, representation, engine)
    left = apply_observable(left, A, representation)
    right = apply_observable(psi0, B, representation)
    right = evolve_map(right, params, t, representation, engine)
    return complex(np.vdot(left.amplitudes, right.amplitudes))
