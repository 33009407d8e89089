"""
Dense reference unitaries built from Kronecker products.

Independent of the stride kernels; meant for tests and audits on n <= 10.
"""

import numpy as np

from .schemas import Circuit, GateKind, GateOp

I2 = np.eye(2, dtype=complex)
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def embed(factors: dict[int, np.ndarray], n_qubits: int) -> np.ndarray:
    """Kronecker product with ``factors[q]`` on qubit q and identity elsewhere."""
    out = np.ones((1, 1), dtype=complex)
    for q in range(n_qubits - 1, -1, -1):
        out = np.kron(out, factors.get(q, I2))
    return out


def phase_matrix(delta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * delta)])


def _basis_permutation(n_qubits: int, mapping) -> np.ndarray:
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        out[mapping(k), k] = 1.0
    return out


def gate_unitary(op: GateOp, n_qubits: int) -> np.ndarray:
    q = op.operands
    match op.kind:
        case GateKind.HADAMARD:
            return embed({q[0]: H2}, n_qubits)
        case GateKind.PHASE_SHIFT:
            return embed({q[0]: phase_matrix(op.params[0])}, n_qubits)
        case GateKind.CNOT:
            return embed({q[0]: P0}, n_qubits) + embed({q[0]: P1, q[1]: X2}, n_qubits)
        case GateKind.CONTROLLED_PHASE:
            return embed({q[0]: P0}, n_qubits) + embed(
                {q[0]: P1, q[1]: phase_matrix(op.params[0])}, n_qubits
            )
        case GateKind.TWO_QUBIT_DIAGONAL:
            i, j = q
            if i == j:
                return embed(
                    {i: np.diag(np.exp(1j * np.array([op.params[0], op.params[3]])))},
                    n_qubits,
                )
            total = np.zeros((1 << n_qubits,) * 2, dtype=complex)
            for a in (0, 1):
                for b in (0, 1):
                    proj = {i: P1 if a else P0, j: P1 if b else P0}
                    total += np.exp(1j * op.params[2 * a + b]) * embed(proj, n_qubits)
            return total
        case GateKind.TABLE_BIT_SET:
            x, width, target = op.table_index, op.table_width, q[0]
            mask = (1 << width) - 1
            return _basis_permutation(
                n_qubits, lambda k: k ^ (1 << target) if k & mask == x else k
            )
        case GateKind.RELABEL:
            order = q

            def move(k: int) -> int:
                return sum(((k >> order[p]) & 1) << p for p in range(n_qubits))

            return _basis_permutation(n_qubits, move)
    raise ValueError(f"no oracle for {op.kind}")


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Product of all gate unitaries, last op leftmost, times the global phase."""
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for op in circuit.ops:
        u = gate_unitary(op, circuit.n_qubits) @ u
    return np.exp(1j * circuit.global_phase) * u


def dft_matrix(n_qubits: int, inverse: bool = False) -> np.ndarray:
    """Unitary DFT F[l, k] = N^(-1/2) exp(+2 pi i k l / N) (conjugated if inverse)."""
    dim = 1 << n_qubits
    k = np.arange(dim)
    sign = -1.0 if inverse else 1.0
    return np.exp(sign * 2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)
