from .schemas import BasisIndex, MeasurementRecord, PauliAxis, StateVector
from .services import (
    apply_cnot,
    apply_controlled_phase,
    apply_hadamard,
    apply_pauli_x,
    apply_pauli_z,
    apply_phase_shift,
    apply_two_qubit_diagonal,
    check_norm,
    expectation_pauli,
    from_amplitudes,
    init_basis_state,
    norm_drift,
    overlap,
    probabilities,
    renormalize,
    sample_measurements,
)

__all__ = [
    "BasisIndex",
    "MeasurementRecord",
    "PauliAxis",
    "StateVector",
    "apply_cnot",
    "apply_controlled_phase",
    "apply_hadamard",
    "apply_pauli_x",
    "apply_pauli_z",
    "apply_phase_shift",
    "apply_two_qubit_diagonal",
    "check_norm",
    "expectation_pauli",
    "from_amplitudes",
    "init_basis_state",
    "norm_drift",
    "overlap",
    "probabilities",
    "renormalize",
    "sample_measurements",
]
