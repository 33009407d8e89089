"""
Dephasing and amplitude-damping channels on density matrices and on
batches of trajectory state vectors.

Density matrices are handled as (2^n, 2^n) arrays: the gate kernels act on
the row index, so M rho M^dagger is computed as M (M rho)^dagger ^dagger.
"""

import numpy as np

from src.exceptions import DomainError
from src.statevec import kernels

from .schemas import Channel, DensityMatrix


def relax_kraus(gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude damping K0 = diag(1, sqrt(1 - gamma)), K1 = sqrt(gamma) |0><1|."""
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return k0, k1


def check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")


def adjoint(rho: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(rho.conj().T)


def sandwich(rho: np.ndarray, n_qubits: int, qubit: int, matrix: np.ndarray) -> np.ndarray:
    """M_q rho M_q^dagger."""
    left = kernels.apply_single_qubit_matrix(rho, n_qubits, qubit, matrix)
    return adjoint(kernels.apply_single_qubit_matrix(adjoint(left), n_qubits, qubit, matrix))


def dephase_entries(rho: np.ndarray, n_qubits: int, qubit: int, p: float) -> np.ndarray:
    if p == 0.0:
        return rho
    sign = 1.0 - 2.0 * kernels.bit_values(n_qubits, qubit)
    return rho * ((1.0 - p) + p * np.outer(sign, sign))


def relax_entries(rho: np.ndarray, n_qubits: int, qubit: int, gamma: float) -> np.ndarray:
    if gamma == 0.0:
        return rho
    k0, k1 = relax_kraus(gamma)
    return sandwich(rho, n_qubits, qubit, k0) + sandwich(rho, n_qubits, qubit, k1)


def apply_channel(
    rho: DensityMatrix, channel: Channel | str, qubit: int, param: float
) -> DensityMatrix:
    """Return the channel applied to ``qubit`` of ``rho``."""
    check_probability("channel parameter", param)
    if not 0 <= qubit < rho.n_qubits:
        raise DomainError(f"qubit {qubit} outside a {rho.n_qubits}-qubit register")
    match Channel(channel):
        case Channel.DEPHASE:
            entries = dephase_entries(rho.entries, rho.n_qubits, qubit, param)
        case Channel.RELAX:
            entries = relax_entries(rho.entries, rho.n_qubits, qubit, param)
    return DensityMatrix(n_qubits=rho.n_qubits, entries=entries)


def dephase_trajectories(
    amps: np.ndarray, n_qubits: int, qubit: int, p: float, rng: np.random.Generator
) -> np.ndarray:
    """Apply Z to each column of ``amps`` with probability p."""
    if p == 0.0:
        return amps
    flip = rng.random(amps.shape[1]) < p
    bit = kernels.bit_values(n_qubits, qubit).astype(bool)
    amps[np.ix_(bit, flip)] *= -1.0
    return amps


def relax_trajectories(
    amps: np.ndarray, n_qubits: int, qubit: int, gamma: float, rng: np.random.Generator
) -> np.ndarray:
    """Sample one amplitude-damping Kraus branch per column and renormalize."""
    if gamma == 0.0:
        return amps
    k0, k1 = relax_kraus(gamma)
    bit = kernels.bit_values(n_qubits, qubit).astype(bool)
    p_jump = gamma * np.sum(np.abs(amps[bit]) ** 2, axis=0)
    jump = rng.random(amps.shape[1]) < p_jump
    stay = kernels.apply_single_qubit_matrix(amps, n_qubits, qubit, k0)
    decay = kernels.apply_single_qubit_matrix(amps, n_qubits, qubit, k1)
    stay /= np.sqrt(np.maximum(1.0 - p_jump, 1e-300))
    decay /= np.sqrt(np.maximum(p_jump, 1e-300))
    return np.ascontiguousarray(np.where(jump[None, :], decay, stay))
