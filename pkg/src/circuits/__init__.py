from .builders import (
    build_diagonal_phase_via_ancilla,
    invert_circuit,
    inverse_qft_circuit,
    lower_to_universal,
    qft_circuit,
    qft_gates,
    quadratic_phase_circuit,
)
from .schemas import AncillaLayout, Circuit, GateKind, GateOp
from .serialization import dumps, loads
from .services import (
    ancilla_phase_table,
    apply_circuit,
    apply_controlled_circuit,
    apply_qft,
    apply_via_ancilla,
    run_on_array,
)

__all__ = [
    "AncillaLayout",
    "Circuit",
    "GateKind",
    "GateOp",
    "ancilla_phase_table",
    "apply_circuit",
    "apply_controlled_circuit",
    "apply_qft",
    "apply_via_ancilla",
    "build_diagonal_phase_via_ancilla",
    "dumps",
    "invert_circuit",
    "inverse_qft_circuit",
    "loads",
    "lower_to_universal",
    "qft_circuit",
    "qft_gates",
    "quadratic_phase_circuit",
    "run_on_array",
]
