"""
Operations on pure n-qubit states.

Gate functions mutate ``state.amplitudes`` in place and return the same
StateVector so calls can be chained.
"""

import logging
import math

import numpy as np

from src.config import settings
from src.exceptions import CapacityError, DomainError
from src.rng import make_rng

from . import kernels
from .schemas import MeasurementRecord, PauliAxis, StateVector

logger = logging.getLogger(__name__)


def _check_width(n_qubits: int) -> None:
    if n_qubits < 1:
        raise DomainError(f"register width must be positive, got {n_qubits}")
    if n_qubits > settings.MAX_STATEVEC_QUBITS:
        raise CapacityError(
            f"{n_qubits} qubits exceed the state-vector cap of {settings.MAX_STATEVEC_QUBITS}"
        )


def _check_qubit(state: StateVector, q: int) -> None:
    if not 0 <= q < state.n_qubits:
        raise DomainError(f"qubit {q} out of range for {state.n_qubits}-qubit register")


def init_basis_state(n_qubits: int, k: int) -> StateVector:
    """Return |k> on an n-qubit register."""
    _check_width(n_qubits)
    if not 0 <= k < 1 << n_qubits:
        raise DomainError(f"basis index {k} out of range [0, {1 << n_qubits})")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[k] = 1.0
    return StateVector(n_qubits=n_qubits, amplitudes=amps)


def from_amplitudes(amplitudes, check_norm: bool = True) -> StateVector:
    """Wrap an amplitude array, inferring the register width."""
    amps = np.ascontiguousarray(amplitudes, dtype=np.complex128).copy()
    n_qubits = int(round(math.log2(amps.size))) if amps.size > 0 else 0
    if amps.ndim != 1 or amps.size != 1 << n_qubits:
        raise DomainError(f"amplitude count {amps.size} is not a power of two")
    _check_width(n_qubits)
    state = StateVector(n_qubits=n_qubits, amplitudes=amps)
    if check_norm and abs(state.norm() - 1.0) > 1e-12:
        raise DomainError(f"amplitudes are not normalized (norm {state.norm():.3e})")
    return state


def apply_hadamard(state: StateVector, q: int) -> StateVector:
    _check_qubit(state, q)
    kernels.hadamard(state.amplitudes, state.n_qubits, q)
    return state


def apply_pauli_x(state: StateVector, q: int) -> StateVector:
    _check_qubit(state, q)
    kernels.pauli_x(state.amplitudes, state.n_qubits, q)
    return state


def apply_pauli_z(state: StateVector, q: int) -> StateVector:
    _check_qubit(state, q)
    kernels.pauli_z(state.amplitudes, state.n_qubits, q)
    return state


def apply_phase_shift(state: StateVector, q: int, delta: float) -> StateVector:
    """|0>_q unchanged, |1>_q multiplied by exp(i delta)."""
    _check_qubit(state, q)
    if not math.isfinite(delta):
        raise DomainError(f"phase must be finite, got {delta}")
    kernels.phase_shift(state.amplitudes, state.n_qubits, q, delta)
    return state


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise DomainError("control and target must differ")
    kernels.cnot(state.amplitudes, state.n_qubits, control, target)
    return state


def apply_controlled_phase(
    state: StateVector, control: int, target: int, phi: float
) -> StateVector:
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise DomainError("control and target must differ")
    kernels.controlled_phase(state.amplitudes, state.n_qubits, control, target, phi)
    return state


def apply_two_qubit_diagonal(
    state: StateVector, i: int, j: int, phases
) -> StateVector:
    """Phase exp(i phi(a_i, a_j)) on every basis state, phases ordered 00, 01, 10, 11."""
    _check_qubit(state, i)
    _check_qubit(state, j)
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (4,) or not np.all(np.isfinite(phases)):
        raise DomainError("two-qubit diagonal needs four finite phases")
    kernels.two_qubit_diagonal(state.amplitudes, state.n_qubits, i, j, phases)
    return state


def expectation_pauli(state: StateVector, q: int, axis: PauliAxis | str) -> float:
    """Exact <psi| sigma_axis^(q) |psi>."""
    _check_qubit(state, q)
    axis = PauliAxis(axis)
    t = state.amplitudes.reshape(-1, 2, 1 << q)
    a0, a1 = t[:, 0, :], t[:, 1, :]
    if axis is PauliAxis.Z:
        value = np.sum(np.abs(a0) ** 2) - np.sum(np.abs(a1) ** 2)
    else:
        cross = np.vdot(a0, a1)
        value = 2.0 * (cross.real if axis is PauliAxis.X else cross.imag)
    return float(value)


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def sample_measurements(state: StateVector, shots: int, seed: int) -> MeasurementRecord:
    """Draw ``shots`` independent Born-rule outcomes."""
    if shots < 1:
        raise DomainError(f"shots must be positive, got {shots}")
    probs = probabilities(state)
    probs = probs / probs.sum()
    draws = make_rng(seed).multinomial(shots, probs)
    counts = {int(k): int(c) for k, c in enumerate(draws) if c > 0}
    return MeasurementRecord(
        n_qubits=state.n_qubits, shots=shots, counts=counts, seed=seed
    )


def overlap(a: StateVector, b: StateVector) -> complex:
    """<a|b>."""
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"width mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm_drift(state: StateVector) -> float:
    return abs(state.norm() - 1.0)


def check_norm(state: StateVector, context: str = "") -> float:
    """Log (never correct) drift above the configured tolerance."""
    drift = norm_drift(state)
    if drift > settings.NORM_TOLERANCE:
        logger.warning(f"Norm drift {drift:.3e} exceeds tolerance {context}".rstrip())
    return drift


def renormalize(state: StateVector) -> StateVector:
    """Explicit renormalization; never called implicitly by gate code."""
    norm = math.sqrt(state.norm())
    if norm == 0.0:
        raise DomainError("cannot renormalize the zero vector")
    state.amplitudes /= norm
    return state
