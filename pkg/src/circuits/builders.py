"""
Circuit builders: QFT, quadratic phase products, the ancilla phase
construction, inversion and lowering to {H, P, CNOT}.
"""

import logging
import math
from collections.abc import Sequence

from src.exceptions import CapacityError, DomainError

from .schemas import ELEMENTARY_KINDS, AncillaLayout, Circuit, GateKind, GateOp

logger = logging.getLogger(__name__)


def hadamard(q: int) -> GateOp:
    return GateOp(kind=GateKind.HADAMARD, operands=(q,))


def phase_shift(q: int, delta: float) -> GateOp:
    return GateOp(kind=GateKind.PHASE_SHIFT, operands=(q,), params=(float(delta),))


def cnot(control: int, target: int) -> GateOp:
    return GateOp(kind=GateKind.CNOT, operands=(control, target))


def controlled_phase(control: int, target: int, phi: float) -> GateOp:
    return GateOp(
        kind=GateKind.CONTROLLED_PHASE, operands=(control, target), params=(float(phi),)
    )


def two_qubit_diagonal(i: int, j: int, phases: Sequence[float]) -> GateOp:
    return GateOp(
        kind=GateKind.TWO_QUBIT_DIAGONAL,
        operands=(i, j),
        params=tuple(float(p) for p in phases),
    )


def table_bit_set(target: int, x: int, width: int) -> GateOp:
    return GateOp(
        kind=GateKind.TABLE_BIT_SET, operands=(target,), params=(float(x), float(width))
    )


def relabel(order: Sequence[int]) -> GateOp:
    return GateOp(kind=GateKind.RELABEL, operands=tuple(order))


def bit_reversal(n_qubits: int) -> tuple[int, ...]:
    return tuple(n_qubits - 1 - q for q in range(n_qubits))


def qft_gates(n_qubits: int) -> list[GateOp]:
    """Hadamard/controlled-phase ladder of the QFT, output left bit-reversed."""
    ops: list[GateOp] = []
    for q in range(n_qubits - 1, -1, -1):
        ops.append(hadamard(q))
        for c in range(q - 1, -1, -1):
            ops.append(controlled_phase(c, q, math.pi / (1 << (q - c))))
    return ops


def qft_circuit(n_qubits: int) -> Circuit:
    """Unitary DFT b_l = N^(-1/2) sum_k exp(2 pi i k l / N) a_k.

    n Hadamards and n(n-1)/2 controlled phases; the final bit reversal is a
    relabel and costs no gates.
    """
    if n_qubits < 1:
        raise DomainError(f"QFT needs at least one qubit, got {n_qubits}")
    ops = qft_gates(n_qubits)
    if n_qubits > 1:
        ops.append(relabel(bit_reversal(n_qubits)))
    return Circuit(n_qubits=n_qubits, ops=tuple(ops), label=f"qft{n_qubits}")


def inverse_qft_circuit(n_qubits: int) -> Circuit:
    return invert_circuit(qft_circuit(n_qubits))


def invert_op(op: GateOp) -> GateOp:
    match op.kind:
        case GateKind.PHASE_SHIFT | GateKind.CONTROLLED_PHASE | GateKind.TWO_QUBIT_DIAGONAL:
            return op.model_copy(update={"params": tuple(-p for p in op.params)})
        case GateKind.RELABEL:
            inverse = [0] * len(op.operands)
            for q, source in enumerate(op.operands):
                inverse[source] = q
            return relabel(inverse)
        case _:
            # H, CNOT and TABLE are involutions
            return op


def invert_circuit(circuit: Circuit) -> Circuit:
    """Formal inverse: reversed ops with conjugated phases."""
    return Circuit(
        n_qubits=circuit.n_qubits,
        ops=tuple(invert_op(op) for op in reversed(circuit.ops)),
        global_phase=-circuit.global_phase,
        label=f"{circuit.label}^-1" if circuit.label else "",
    )


def quadratic_phase_circuit(
    n_qubits: int,
    weights: Sequence[float],
    offsets: Sequence[float],
    coefficient: float,
    linear: float = 0.0,
    qubits: Sequence[int] | None = None,
    label: str = "",
) -> Circuit:
    """n^2 two-qubit diagonal gates realising exp(i (a X^2 + b X)).

    X = sum_q (w_q bit_q + s_q) with a = ``coefficient`` and b = ``linear``.
    Expanding X^2 over ordered pairs (p, q) gives one gate per pair; the
    diagonal pairs (p, p) also carry the linear term. ``qubits[q]`` is the
    physical wire of logical bit q.
    """
    size = len(weights)
    if len(offsets) != size:
        raise DomainError("weights and offsets must have equal length")
    qubits = list(range(size)) if qubits is None else list(qubits)
    if len(qubits) != size or any(not 0 <= q < n_qubits for q in qubits):
        raise DomainError(f"qubit map {qubits} does not fit {n_qubits} qubits")

    def term(q: int, bit: int) -> float:
        return weights[q] * bit + offsets[q]

    ops = []
    for p in range(size):
        for q in range(size):
            if p == q:
                phi0 = coefficient * term(p, 0) ** 2 + linear * term(p, 0)
                phi1 = coefficient * term(p, 1) ** 2 + linear * term(p, 1)
                phases = (phi0, 0.0, 0.0, phi1)
            else:
                phases = tuple(
                    coefficient * term(p, a) * term(q, b) for a in (0, 1) for b in (0, 1)
                )
            ops.append(two_qubit_diagonal(qubits[p], qubits[q], phases))
    return Circuit(n_qubits=n_qubits, ops=tuple(ops), label=label)


def build_diagonal_phase_via_ancilla(layout: AncillaLayout) -> Circuit:
    """|0>_a |x> -> exp(i c f(x)) |0>_a |x> in three stages.

    1. write f(x) into the ancilla with x-conditioned bit flips,
    2. one phase shift c 2^j per ancilla bit j,
    3. stage 1 in reverse order, returning the ancilla to |0...0>.
    """
    n, m = layout.data_qubits, layout.ancilla_qubits
    limit = 1 << m
    for x, value in enumerate(layout.function_table):
        if not 0 <= value < limit:
            raise CapacityError(
                f"f({x}) = {value} does not fit in {m} ancilla bits"
            )

    evaluate = [
        table_bit_set(layout.ancilla_qubit(j), x, n)
        for x, value in enumerate(layout.function_table)
        for j in range(m)
        if (value >> j) & 1
    ]
    kick = [
        phase_shift(layout.ancilla_qubit(j), layout.value_scale * (1 << j))
        for j in range(m)
    ]
    ops = evaluate + kick + list(reversed(evaluate))
    circuit = Circuit(
        n_qubits=layout.total_qubits, ops=tuple(ops), label=f"ancilla-phase n={n} m={m}"
    )
    logger.debug(
        f"Ancilla phase circuit: {len(evaluate)} table ops per stage, "
        f"{circuit.elementary_count} elementary gates"
    )
    return circuit


def lower_to_universal(circuit: Circuit) -> Circuit:
    """Rewrite CP and DIAG gates over {H, P, CNOT}; global phases are tracked."""
    ops: list[GateOp] = []
    global_phase = circuit.global_phase
    for op in circuit.ops:
        match op.kind:
            case GateKind.CONTROLLED_PHASE:
                (c, t), (phi,) = op.operands, op.params
                ops += _lower_cp(c, t, phi)
            case GateKind.TWO_QUBIT_DIAGONAL:
                (i, j), (p00, p01, p10, p11) = op.operands, op.params
                global_phase += p00
                if i == j:
                    ops.append(phase_shift(i, p11 - p00))
                    continue
                ops.append(phase_shift(i, p10 - p00))
                ops.append(phase_shift(j, p01 - p00))
                ops += _lower_cp(i, j, p11 - p10 - p01 + p00)
            case GateKind.TABLE_BIT_SET:
                raise DomainError(
                    "multi-controlled table bit-sets have no {H, P, CNOT} lowering"
                )
            case _:
                ops.append(op)
    lowered = Circuit(
        n_qubits=circuit.n_qubits,
        ops=tuple(ops),
        global_phase=global_phase,
        label=circuit.label,
    )
    assert all(op.kind in ELEMENTARY_KINDS for op in lowered.ops if op.is_gate)
    return lowered


def _lower_cp(control: int, target: int, phi: float) -> list[GateOp]:
    half = phi / 2.0
    return [
        phase_shift(control, half),
        phase_shift(target, half),
        cnot(control, target),
        phase_shift(target, -half),
        cnot(control, target),
    ]
