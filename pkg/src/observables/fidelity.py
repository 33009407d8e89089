"""
Fidelity of the sawtooth map under a kick-strength perturbation k -> k + eps_k.

The direct path compares two evolved states; the Ramsey path reads the same
quantity from the polarisation of one ancilla qubit that controls the echo
circuit W = (U_eps^dagger)^t U^t.
"""

import logging
import math
from typing import Literal

import numpy as np

from src.circuits import Circuit, apply_controlled_circuit, invert_circuit
from src.exceptions import DomainError
from src.rng import spawn_seeds
from src.sawtooth import Representation, SawtoothParams
from src.sawtooth.services import map_step_circuit
from src.statevec import (
    PauliAxis,
    StateVector,
    apply_hadamard,
    apply_phase_shift,
    expectation_pauli,
    sample_measurements,
)

from .schemas import RamseyResult
from .services import Engine, evolve_map

logger = logging.getLogger(__name__)


def fidelity_direct(
    psi0: StateVector,
    params: SawtoothParams,
    eps_k: float,
    t: int,
    representation: Representation = Representation.THETA,
    engine: Engine = "circuit",
) -> float:
    """|<psi0| (U_eps^dagger)^t U^t |psi0>|^2."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    forward = evolve_map(psi0.copy(), params, t, representation, engine)
    perturbed = evolve_map(psi0.copy(), params.perturbed(eps_k), t, representation, engine)
    return float(abs(np.vdot(perturbed.amplitudes, forward.amplitudes)) ** 2)


def loschmidt_circuit(
    params: SawtoothParams,
    eps_k: float,
    t: int,
    representation: Representation = Representation.THETA,
) -> Circuit:
    """W = (U_eps^dagger)^t U^t as one circuit of 2t (3n^2 + n) gates."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    step = map_step_circuit(params, representation)
    back = invert_circuit(map_step_circuit(params.perturbed(eps_k), representation))
    return Circuit(
        n_qubits=params.n,
        ops=step.ops * t + back.ops * t,
        global_phase=t * (step.global_phase + back.global_phase),
        label=f"loschmidt t={t} eps_k={eps_k!r}",
    )


def ramsey_state(psi0: StateVector, W: Circuit) -> StateVector:
    """(H_a) controlled-W (H_a) |0>_a |psi0>, ancilla on qubit n."""
    n = psi0.n_qubits
    if W.n_qubits != n:
        raise DomainError(
            f"controlled circuit acts on {W.n_qubits} qubits, state has {n}"
        )
    amps = np.zeros(1 << (n + 1), dtype=np.complex128)
    amps[: 1 << n] = psi0.amplitudes
    state = StateVector(n_qubits=n + 1, amplitudes=amps)
    apply_hadamard(state, n)
    apply_controlled_circuit(state, W)
    apply_hadamard(state, n)
    return state


def _ancilla_z(state: StateVector, shots: int, seed: int) -> float:
    record = sample_measurements(state, shots, seed)
    freq = record.frequencies()
    return float(1.0 - 2.0 * freq[state.dimension // 2 :].sum())


def fidelity_ramsey(
    psi0: StateVector,
    W: Circuit,
    shots: int | None = None,
    seed: int = 0,
) -> RamseyResult:
    """Ancilla polarisations and f = <sigma_z>^2 + <sigma_y>^2.

    With ``shots`` the two polarisations are also estimated from independent
    Z-basis samples, the y-component after rotating the ancilla by S^dagger
    and H.
    """
    state = ramsey_state(psi0, W)
    ancilla = psi0.n_qubits
    sigma_z = expectation_pauli(state, ancilla, PauliAxis.Z)
    sigma_y = -expectation_pauli(state, ancilla, PauliAxis.Y)
    result = RamseyResult(
        sigma_z=sigma_z, sigma_y=sigma_y, fidelity=sigma_z**2 + sigma_y**2
    )
    if shots is None:
        return result

    seed_z, seed_y = (int(s.generate_state(1)[0]) for s in spawn_seeds(seed, 2))
    sampled_z = _ancilla_z(state, shots, seed_z)
    rotated = state.copy()
    apply_phase_shift(rotated, ancilla, -math.pi / 2)
    apply_hadamard(rotated, ancilla)
    sampled_y = -_ancilla_z(rotated, shots, seed_y)
    logger.debug(f"Ramsey sampling with {shots} shots: z={sampled_z:.4f}, y={sampled_y:.4f}")
    return result.model_copy(
        update={
            "shots": shots,
            "sampled_sigma_z": sampled_z,
            "sampled_sigma_y": sampled_y,
            "sampled_fidelity": sampled_z**2 + sampled_y**2,
        }
    )


def fidelity_decay(
    psi0: StateVector,
    params: SawtoothParams,
    eps_k: float,
    times: list[int],
    method: Literal["direct", "ramsey"] = "direct",
    representation: Representation = Representation.THETA,
) -> list[tuple[int, float]]:
    """Rows (t, f(t)) for each requested t."""
    rows = []
    for t in times:
        if method == "ramsey":
            W = loschmidt_circuit(params, eps_k, t, representation)
            f = fidelity_ramsey(psi0, W).fidelity
        else:
            f = fidelity_direct(psi0, params, eps_k, t, representation)
        rows.append((t, f))
    logger.info(f"Fidelity decay ({method}) over {len(times)} times, eps_k={eps_k}")
    return rows
