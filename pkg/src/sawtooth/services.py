"""
Quantum sawtooth map: gate-level circuits and an FFT reference evolver.
"""

import logging
import math
import time

import numpy as np

from src.circuits import (
    Circuit,
    apply_circuit,
    invert_circuit,
    qft_gates,
    quadratic_phase_circuit,
)
from src.exceptions import DomainError
from src.statevec import StateVector, check_norm, init_basis_state

from .schemas import Representation, SawtoothParams, SignedActionMap

logger = logging.getLogger(__name__)


def _theta_weights(n: int) -> tuple[list[float], list[float]]:
    # theta - pi = sum_q (2 pi 2^(q-n) b_q - pi/n)
    weights = [2.0 * math.pi * 2.0 ** (q - n) for q in range(n)]
    offsets = [-math.pi / n] * n
    return weights, offsets


def _signed_weights(n: int) -> list[float]:
    # two's complement: m = sum_{q<n-1} 2^q b_q - 2^(n-1) b_(n-1)
    weights = [float(1 << q) for q in range(n)]
    weights[-1] = -weights[-1]
    return weights


def uk_circuit(params: SawtoothParams, bit_reversed: bool = False) -> Circuit:
    """n^2 two-qubit diagonal gates realising exp(i k (theta - pi)^2 / 2)."""
    n = params.n
    weights, offsets = _theta_weights(n)
    qubits = list(reversed(range(n))) if bit_reversed else None
    return quadratic_phase_circuit(
        n, weights, offsets, coefficient=params.k / 2.0, qubits=qubits, label="U_k"
    )


def ut_circuit(params: SawtoothParams, bit_reversed: bool = False) -> Circuit:
    """n^2 two-qubit diagonal gates realising exp(-i T m^2 / 2) over signed m."""
    n = params.n
    qubits = list(reversed(range(n))) if bit_reversed else None
    return quadratic_phase_circuit(
        n,
        _signed_weights(n),
        [0.0] * n,
        coefficient=-params.T / 2.0,
        qubits=qubits,
        label="U_T",
    )


def map_step_circuit(
    params: SawtoothParams, representation: Representation = Representation.THETA
) -> Circuit:
    """One map period U = U_T U_k in 3n^2 + n gates.

    The QFT's bit reversal is never executed: the diagonal sandwiched between
    the forward and inverse ladders addresses the reversed wires instead.
    In the theta representation the step reads U_k, QFT, U_T, QFT^-1; in the
    action representation QFT, U_k, QFT^-1, U_T.
    """
    n = params.n
    forward = Circuit(n_qubits=n, ops=tuple(qft_gates(n)), label="qft")
    backward = invert_circuit(forward)
    if Representation(representation) is Representation.THETA:
        parts = [uk_circuit(params), forward, ut_circuit(params, bit_reversed=True), backward]
    else:
        parts = [forward, uk_circuit(params, bit_reversed=True), backward, ut_circuit(params)]
    step = parts[0]
    for part in parts[1:]:
        step = step.then(part)
    step = step.model_copy(update={"label": f"sawtooth-step n={n} {representation}"})
    logger.debug(f"Map step for n={n}: {step.gate_count} gates {step.counts}")
    return step


def theta_grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(1 << n) / (1 << n)


def kick_phases(params: SawtoothParams) -> np.ndarray:
    return np.exp(0.5j * params.k * (theta_grid(params.n) - np.pi) ** 2)


def rotation_phases(params: SawtoothParams) -> np.ndarray:
    m = SignedActionMap(n=params.n).values()
    return np.exp(-0.5j * params.T * m.astype(float) ** 2)


def initial_state(
    params: SawtoothParams, representation: Representation = Representation.THETA
) -> StateVector:
    """Action eigenstate |m0> in the requested representation."""
    amps = init_basis_state(params.n, params.m0 % params.N).amplitudes
    if Representation(representation) is Representation.THETA:
        amps = np.fft.ifft(amps, norm="ortho")
    return StateVector(n_qubits=params.n, amplitudes=amps)


def _check_width(state: StateVector, params: SawtoothParams) -> None:
    if state.n_qubits != params.n:
        raise DomainError(
            f"state has {state.n_qubits} qubits, map is defined on {params.n}"
        )


def evolve_quantum(
    state: StateVector,
    params: SawtoothParams,
    steps: int,
    representation: Representation = Representation.THETA,
) -> StateVector:
    """Apply the gate-level map step ``steps`` times."""
    _check_width(state, params)
    if steps < 0:
        raise DomainError(f"steps must be non-negative, got {steps}")
    circuit = map_step_circuit(params, representation)
    start = time.perf_counter()
    for _ in range(steps):
        apply_circuit(state, circuit)
    elapsed = time.perf_counter() - start
    logger.info(
        f"Gate evolution n={params.n}, t={steps}: "
        f"{steps * circuit.gate_count} gates in {elapsed:.2f}s"
    )
    check_norm(state, f"after {steps} map steps")
    return state


def evolve_reference(
    state: StateVector,
    params: SawtoothParams,
    steps: int,
    representation: Representation = Representation.THETA,
) -> StateVector:
    """Split-operator evolution with diagonal multiplications and numpy FFTs."""
    _check_width(state, params)
    if steps < 0:
        raise DomainError(f"steps must be non-negative, got {steps}")
    kick, rotate = kick_phases(params), rotation_phases(params)
    psi = state.amplitudes
    if Representation(representation) is Representation.THETA:
        for _ in range(steps):
            psi = np.fft.ifft(rotate * np.fft.fft(kick * psi, norm="ortho"), norm="ortho")
    else:
        for _ in range(steps):
            psi = rotate * np.fft.fft(kick * np.fft.ifft(psi, norm="ortho"), norm="ortho")
    state.amplitudes = np.ascontiguousarray(psi)
    check_norm(state, f"after {steps} reference steps")
    return state


def action_probabilities(
    state: StateVector, representation: Representation = Representation.THETA
) -> np.ndarray:
    """W over register index (index i holds m = i or i - N)."""
    if Representation(representation) is Representation.THETA:
        return np.abs(np.fft.fft(state.amplitudes, norm="ortho")) ** 2
    return np.abs(state.amplitudes) ** 2


def quantum_second_moments(params: SawtoothParams, t_max: int) -> np.ndarray:
    """<(m - m0)^2> for t = 0 .. t_max starting from |m0>, via the FFT evolver."""
    m = SignedActionMap(n=params.n).values().astype(float)
    state = initial_state(params)
    moments = np.empty(t_max + 1)
    moments[0] = 0.0
    for t in range(1, t_max + 1):
        evolve_reference(state, params, 1)
        moments[t] = float(np.sum(action_probabilities(state) * (m - params.m0) ** 2))
    return moments


def break_time(moments: np.ndarray, D: float, fraction: float = 0.5) -> int | None:
    """First t >= 1 where the quantum moment falls below ``fraction`` of D t."""
    for t in range(1, len(moments)):
        if moments[t] < fraction * D * t:
            return t
    return None
