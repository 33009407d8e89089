"""
Circuit execution on state vectors and raw amplitude arrays.
"""

import logging

import numpy as np

from src.exceptions import DomainError, NumericalError
from src.statevec import StateVector
from src.statevec import kernels

from .builders import inverse_qft_circuit, qft_circuit
from .schemas import Circuit, GateKind, GateOp

logger = logging.getLogger(__name__)


def apply_op(amps: np.ndarray, n_qubits: int, op: GateOp) -> np.ndarray:
    """Apply one op to ``amps`` (leading axis 2^n, optional batch axes).

    Kernels work in place; the returned array differs from ``amps`` only for
    a relabel.
    """
    q = op.operands
    match op.kind:
        case GateKind.HADAMARD:
            kernels.hadamard(amps, n_qubits, q[0])
        case GateKind.PHASE_SHIFT:
            kernels.phase_shift(amps, n_qubits, q[0], op.params[0])
        case GateKind.CNOT:
            kernels.cnot(amps, n_qubits, q[0], q[1])
        case GateKind.CONTROLLED_PHASE:
            kernels.controlled_phase(amps, n_qubits, q[0], q[1], op.params[0])
        case GateKind.TWO_QUBIT_DIAGONAL:
            kernels.two_qubit_diagonal(amps, n_qubits, q[0], q[1], op.params)
        case GateKind.TABLE_BIT_SET:
            kernels.table_bit_set(amps, n_qubits, op.table_width, op.table_index, q[0])
        case GateKind.RELABEL:
            return kernels.permute_qubits(amps, n_qubits, op.operands)
    return amps


def run_on_array(amps: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Run every op of ``circuit`` and its global phase over ``amps``."""
    if amps.shape[0] != 1 << circuit.n_qubits:
        raise DomainError(
            f"{circuit.n_qubits}-qubit circuit cannot act on {amps.shape[0]} amplitudes"
        )
    for op in circuit.ops:
        amps = apply_op(amps, circuit.n_qubits, op)
    if circuit.global_phase != 0.0:
        amps *= np.exp(1j * circuit.global_phase)
    return amps


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Apply ``circuit`` to ``state`` in order and return the mutated state."""
    if state.n_qubits != circuit.n_qubits:
        raise DomainError(
            f"width mismatch: state has {state.n_qubits} qubits, "
            f"circuit has {circuit.n_qubits}"
        )
    state.amplitudes = run_on_array(state.amplitudes, circuit)
    logger.debug(f"Executed {circuit.gate_count} gates {circuit.counts}")
    return state


def apply_controlled_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Run ``circuit`` on the branch where the top qubit (the control) is 1.

    ``state`` has circuit.n_qubits + 1 qubits; the global phase of the
    circuit is applied to the controlled branch only.
    """
    if state.n_qubits != circuit.n_qubits + 1:
        raise DomainError(
            f"controlled {circuit.n_qubits}-qubit circuit needs a "
            f"{circuit.n_qubits + 1}-qubit register, got {state.n_qubits}"
        )
    half = 1 << circuit.n_qubits
    block = state.amplitudes[half:]
    state.amplitudes[half:] = run_on_array(block, circuit)
    return state


def apply_qft(state: StateVector, inverse: bool = False) -> StateVector:
    circuit = inverse_qft_circuit(state.n_qubits) if inverse else qft_circuit(state.n_qubits)
    return apply_circuit(state, circuit)


def ancilla_phase_table(circuit: Circuit, data_qubits: int) -> np.ndarray:
    """Execute an ancilla phase circuit branch by branch.

    Every data basis state |x> keeps its own classical ancilla word, so an
    n-data/m-ancilla circuit costs O(2^n) memory instead of O(2^(n+m)).
    Returns the phase acquired by each |x>. Raises if any branch leaves the
    ancilla dirty.
    """
    size = 1 << data_qubits
    ancilla = np.zeros(size, dtype=np.int64)
    phase = np.zeros(size)
    index = np.arange(size)
    pending_x: list[int] = []
    pending_bit: list[int] = []

    def flush() -> None:
        if pending_x:
            masks = np.left_shift(1, np.asarray(pending_bit, dtype=np.int64))
            np.bitwise_xor.at(ancilla, np.asarray(pending_x), masks)
            pending_x.clear()
            pending_bit.clear()

    for op in circuit.ops:
        if op.kind is GateKind.TABLE_BIT_SET:
            if op.table_width != data_qubits or op.operands[0] < data_qubits:
                raise DomainError("table bit-set must target the ancilla register")
            pending_x.append(op.table_index)
            pending_bit.append(op.operands[0] - data_qubits)
            continue
        flush()
        if op.kind is not GateKind.PHASE_SHIFT:
            raise DomainError(f"{op.kind} is not supported by the branch executor")
        q = op.operands[0]
        if q >= data_qubits:
            phase += op.params[0] * ((ancilla >> (q - data_qubits)) & 1)
        else:
            phase += op.params[0] * ((index >> q) & 1)
    flush()

    dirty = np.count_nonzero(ancilla)
    if dirty:
        raise NumericalError(f"ancilla left non-zero on {dirty} branches")
    return phase + circuit.global_phase


def apply_via_ancilla(
    state: StateVector, circuit: Circuit, data_qubits: int
) -> StateVector:
    """Apply an ancilla phase circuit to a data-register state."""
    if state.n_qubits != data_qubits:
        raise DomainError(
            f"state has {state.n_qubits} qubits, data register has {data_qubits}"
        )
    state.amplitudes *= np.exp(1j * ancilla_phase_table(circuit, data_qubits))
    return state
