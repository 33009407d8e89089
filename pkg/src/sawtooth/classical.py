"""
Classical sawtooth map and ensemble diffusion.

One period integrates the kicked Hamiltonian: kick I' = I + k (theta - pi),
then free rotation theta' = theta + T I' (mod 2 pi).
"""

import logging

import numpy as np

from src.config import settings
from src.exceptions import FitError
from src.rng import make_rng, spawn_seeds

from .schemas import ClassicalEnsemble, DiffusionFit, SawtoothParams

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def classical_step(actions, angles, params: SawtoothParams):
    """Kick then rotate; works on scalars and arrays alike."""
    actions = actions + params.k * (angles - np.pi)
    angles = np.mod(angles + params.T * actions, TWO_PI)
    return actions, angles


def sample_ensemble(params: SawtoothParams, size: int, seed: int) -> ClassicalEnsemble:
    """Fixed action I = m0 and uniform angles.

    Angles are drawn in blocks of TRAJECTORY_BLOCK_SIZE, block i from the
    i-th child of ``seed``, so the ensemble does not depend on how it is split
    across workers.
    """
    block = settings.TRAJECTORY_BLOCK_SIZE
    n_blocks = -(-size // block)
    chunks = []
    for i, child in enumerate(spawn_seeds(seed, n_blocks)):
        count = min(block, size - i * block)
        chunks.append(make_rng(child).uniform(0.0, TWO_PI, count))
    angles = np.concatenate(chunks) if chunks else np.empty(0)
    actions = np.full(size, float(params.m0))
    return ClassicalEnsemble(actions=actions, angles=angles, seed=seed)


def evolve_ensemble(
    ensemble: ClassicalEnsemble, params: SawtoothParams, steps: int
) -> ClassicalEnsemble:
    actions, angles = ensemble.actions, ensemble.angles
    for _ in range(steps):
        actions, angles = classical_step(actions, angles, params)
    return ClassicalEnsemble(actions=actions, angles=angles, seed=ensemble.seed)


def classical_second_moments(
    params: SawtoothParams, ensemble_size: int, t_max: int, seed: int
) -> np.ndarray:
    """<(I - I0)^2> over the ensemble for t = 0 .. t_max."""
    ensemble = sample_ensemble(params, ensemble_size, seed)
    actions, angles = ensemble.actions, ensemble.angles
    start = actions.copy()
    moments = np.empty(t_max + 1)
    moments[0] = 0.0
    for t in range(1, t_max + 1):
        actions, angles = classical_step(actions, angles, params)
        moments[t] = float(np.mean((actions - start) ** 2))
    return moments


def fit_through_origin(times: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """Slope, its standard error and R^2 of values ~ D t."""
    design = times[:, None].astype(float)
    (slope,), *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = values - slope * times
    ss_res = float(np.sum(residual**2))
    ss_tot = float(np.sum((values - values.mean()) ** 2))
    if ss_res == 0.0:
        r_squared = 1.0
    elif ss_tot > 0.0:
        r_squared = 1.0 - ss_res / ss_tot
    else:
        r_squared = 0.0
    dof = max(len(times) - 1, 1)
    stderr = float(np.sqrt(ss_res / dof / np.sum(times.astype(float) ** 2)))
    return float(slope), stderr, r_squared


def diffusion_coefficient(
    params: SawtoothParams, ensemble_size: int, t_max: int, seed: int
) -> DiffusionFit:
    """Fit <(I - I0)^2> = D t for an ensemble launched at I = m0."""
    if t_max < 2:
        raise FitError(f"need t_max >= 2 for a diffusion fit, got {t_max}")
    if ensemble_size < 1:
        raise FitError("ensemble must contain at least one trajectory")
    if not params.is_chaotic:
        logger.warning(
            f"kT = {params.K:.4g} lies in [-4, 0]: integrable/quasi-integrable regime, "
            "diffusion is not expected"
        )

    moments = classical_second_moments(params, ensemble_size, t_max, seed)
    times = np.arange(t_max + 1)
    D, stderr, r_squared = fit_through_origin(times[1:], moments[1:])
    logger.info(
        f"Classical diffusion kT={params.K:.4g}, k={params.k:.4g}: "
        f"D = {D:.6g} +/- {stderr:.2g}, R^2 = {r_squared:.4f}"
    )
    return DiffusionFit(
        D=D,
        D_stderr=stderr,
        r_squared=r_squared,
        times=times.tolist(),
        second_moments=moments.tolist(),
        ensemble_size=ensemble_size,
        seed=seed,
        chaotic=params.is_chaotic,
    )
