"""
Husimi phase-space distributions on the torus [0, 2 pi) x [-N/2, N/2).

Coherent states are Gaussian in the action with width sigma_I = sqrt(N / 4 pi)
and periodic in the angle; sigma_theta * sigma_I = 1/2.
"""

import logging
import math

import numpy as np

from src.exceptions import DomainError
from src.sawtooth import Representation, SawtoothParams, SignedActionMap
from src.sawtooth.services import evolve_reference
from src.statevec import StateVector

from .schemas import HusimiGrid, HusimiSpec

logger = logging.getLogger(__name__)


def default_sigma_action(n: int) -> float:
    return math.sqrt((1 << n) / (4.0 * math.pi))


def _wrap(d: np.ndarray, size: int) -> np.ndarray:
    return (d + size / 2) % size - size / 2


def _envelope(distance: np.ndarray, sigma_action: float) -> np.ndarray:
    return np.exp(-(distance**2) / (4.0 * sigma_action**2))


def coherent_state(
    n: int,
    theta0: float,
    action0: float,
    sigma_action: float | None = None,
    representation: Representation = Representation.THETA,
) -> StateVector:
    """Normalized coherent state centred at (theta0, action0)."""
    sigma = sigma_action or default_sigma_action(n)
    size = 1 << n
    m = SignedActionMap(n=n).values().astype(float)
    phi = _envelope(_wrap(m - action0, size), sigma) * np.exp(-1j * m * theta0)
    phi /= np.linalg.norm(phi)
    if Representation(representation) is Representation.THETA:
        phi = np.fft.ifft(phi, norm="ortho")
    return StateVector(n_qubits=n, amplitudes=phi)


def _action_amplitudes(state: StateVector, representation: Representation) -> np.ndarray:
    if Representation(representation) is Representation.THETA:
        return np.fft.fft(state.amplitudes, norm="ortho")
    return state.amplitudes


def _raw_husimi(
    phi: np.ndarray, n: int, spec: HusimiSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    size = 1 << n
    sigma = spec.sigma_action or default_sigma_action(n)
    m = SignedActionMap(n=n).values().astype(float)
    theta = 2.0 * np.pi * np.arange(spec.n_theta) / spec.n_theta
    actions = -size / 2 + np.arange(spec.n_action) * size / spec.n_action
    envelope = _envelope(_wrap(m[None, :] - actions[:, None], size), sigma)
    weighted = envelope * phi[None, :]
    fourier = np.exp(1j * np.outer(theta, m))
    values = np.abs(fourier @ weighted.T) ** 2
    return values, theta, actions, sigma


def husimi(
    state: StateVector,
    spec: HusimiSpec | None = None,
    representation: Representation = Representation.THETA,
) -> HusimiGrid:
    """|<theta_j, I_k|psi>|^2 on the grid, normalized so sum * cell area = 1."""
    spec = spec or HusimiSpec()
    n = state.n_qubits
    values, theta, actions, sigma = _raw_husimi(
        _action_amplitudes(state, representation), n, spec
    )
    return _finish(values, theta, actions, sigma, n, spec)


def _finish(
    values: np.ndarray,
    theta: np.ndarray,
    actions: np.ndarray,
    sigma: float,
    n: int,
    spec: HusimiSpec,
) -> HusimiGrid:
    coarse = spec.n_theta * spec.n_action < 1 << n
    if coarse:
        logger.warning(
            f"Husimi grid {spec.n_theta}x{spec.n_action} has fewer cells than N={1 << n}"
        )
    grid = HusimiGrid(
        values=values,
        theta=theta,
        actions=actions,
        sigma_theta=1.0 / (2.0 * sigma),
        sigma_action=sigma,
        coarse=coarse,
    )
    total = values.sum() * grid.cell_area
    if total == 0.0:
        raise DomainError("Husimi function vanishes on the whole grid")
    grid.values = values / total
    return grid


def time_averaged_husimi(
    psi0: StateVector,
    params: SawtoothParams,
    t_start: int,
    t_stop: int,
    spec: HusimiSpec | None = None,
    representation: Representation = Representation.THETA,
) -> HusimiGrid:
    """Husimi function averaged over t_start <= t <= t_stop map steps."""
    if not 0 <= t_start <= t_stop:
        raise DomainError(f"need 0 <= t_start <= t_stop, got {t_start}, {t_stop}")
    spec = spec or HusimiSpec()
    state = evolve_reference(psi0.copy(), params, t_start, representation)
    total = None
    for t in range(t_start, t_stop + 1):
        if t > t_start:
            evolve_reference(state, params, 1, representation)
        values, theta, actions, sigma = _raw_husimi(
            _action_amplitudes(state, representation), params.n, spec
        )
        total = values if total is None else total + values
    logger.info(
        f"Husimi averaged over t={t_start}..{t_stop} "
        f"on a {spec.n_theta}x{spec.n_action} grid"
    )
    return _finish(total / (t_stop - t_start + 1), theta, actions, sigma, params.n, spec)
