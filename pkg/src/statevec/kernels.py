"""In-place gate kernels over amplitude arrays.

Arrays have a leading axis of length 2^n (basis index, qubit 0 least
significant) and may carry trailing batch axes: trajectory batches use shape
(2^n, count) and density matrices are processed as (2^n, 2^n). The array is
viewed as an n-fold tensor of 2-dimensional axes so that each kernel pairs
amplitudes by stride without copying the register.
"""

import numpy as np

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _tensor(amps: np.ndarray, n_qubits: int) -> np.ndarray:
    if not amps.flags.c_contiguous:
        raise ValueError("gate kernels need a C-contiguous amplitude array")
    return amps.reshape((2,) * n_qubits + amps.shape[1:])


def _axis(n_qubits: int, qubit: int) -> int:
    return n_qubits - 1 - qubit


def _select(ndim: int, fixed: dict[int, int]) -> tuple:
    index: list = [slice(None)] * ndim
    for axis, bit in fixed.items():
        index[axis] = bit
    return tuple(index)


def hadamard(amps: np.ndarray, n_qubits: int, qubit: int) -> None:
    t = _tensor(amps, n_qubits)
    ax = _axis(n_qubits, qubit)
    lo, hi = _select(t.ndim, {ax: 0}), _select(t.ndim, {ax: 1})
    a0 = t[lo].copy()
    a1 = t[hi]
    t[lo] = (a0 + a1) * INV_SQRT2
    t[hi] = (a0 - a1) * INV_SQRT2


def phase_shift(amps: np.ndarray, n_qubits: int, qubit: int, delta: float) -> None:
    t = _tensor(amps, n_qubits)
    t[_select(t.ndim, {_axis(n_qubits, qubit): 1})] *= np.exp(1j * delta)


def pauli_x(amps: np.ndarray, n_qubits: int, qubit: int) -> None:
    t = _tensor(amps, n_qubits)
    ax = _axis(n_qubits, qubit)
    lo, hi = _select(t.ndim, {ax: 0}), _select(t.ndim, {ax: 1})
    tmp = t[lo].copy()
    t[lo] = t[hi]
    t[hi] = tmp


def pauli_z(amps: np.ndarray, n_qubits: int, qubit: int) -> None:
    t = _tensor(amps, n_qubits)
    t[_select(t.ndim, {_axis(n_qubits, qubit): 1})] *= -1.0


def cnot(amps: np.ndarray, n_qubits: int, control: int, target: int) -> None:
    t = _tensor(amps, n_qubits)
    ac, at = _axis(n_qubits, control), _axis(n_qubits, target)
    lo = _select(t.ndim, {ac: 1, at: 0})
    hi = _select(t.ndim, {ac: 1, at: 1})
    tmp = t[lo].copy()
    t[lo] = t[hi]
    t[hi] = tmp


def controlled_phase(
    amps: np.ndarray, n_qubits: int, control: int, target: int, phi: float
) -> None:
    t = _tensor(amps, n_qubits)
    sel = _select(t.ndim, {_axis(n_qubits, control): 1, _axis(n_qubits, target): 1})
    t[sel] *= np.exp(1j * phi)


def two_qubit_diagonal(
    amps: np.ndarray, n_qubits: int, i: int, j: int, phases
) -> None:
    """Multiply |.. a_i .. a_j ..> by exp(i phases[2 a_i + a_j]).

    With ``i == j`` only phases[0] and phases[3] act (bit value 0 and 1).
    """
    t = _tensor(amps, n_qubits)
    factors = np.exp(1j * np.asarray(phases, dtype=float))
    if i == j:
        ax = _axis(n_qubits, i)
        if factors[0] != 1.0:
            t[_select(t.ndim, {ax: 0})] *= factors[0]
        t[_select(t.ndim, {ax: 1})] *= factors[3]
        return
    ai, aj = _axis(n_qubits, i), _axis(n_qubits, j)
    block = factors.reshape(2, 2)
    if ai > aj:
        block = block.T
    shape = [1] * t.ndim
    shape[ai] = 2
    shape[aj] = 2
    t *= block.reshape(shape)


def table_bit_set(
    amps: np.ndarray, n_qubits: int, data_qubits: int, x: int, target: int
) -> None:
    """Flip qubit ``target`` on the branch where the low ``data_qubits`` bits equal x."""
    t = _tensor(amps, n_qubits)
    fixed = {_axis(n_qubits, q): (x >> q) & 1 for q in range(data_qubits)}
    at = _axis(n_qubits, target)
    lo = _select(t.ndim, {**fixed, at: 0})
    hi = _select(t.ndim, {**fixed, at: 1})
    tmp = t[lo].copy()
    t[lo] = t[hi]
    t[hi] = tmp


def apply_single_qubit_matrix(
    amps: np.ndarray, n_qubits: int, qubit: int, matrix: np.ndarray
) -> np.ndarray:
    """Return M_q @ amps for an arbitrary 2x2 ``matrix`` (not restricted to unitaries)."""
    t = _tensor(amps, n_qubits)
    ax = _axis(n_qubits, qubit)
    out = np.tensordot(matrix, t, axes=([1], [ax]))
    return np.ascontiguousarray(np.moveaxis(out, 0, ax)).reshape(amps.shape)


def bit_values(n_qubits: int, qubit: int) -> np.ndarray:
    """Bit ``qubit`` of every basis index 0 .. 2^n - 1."""
    return (np.arange(1 << n_qubits) >> qubit) & 1


def permute_qubits(amps: np.ndarray, n_qubits: int, order: tuple[int, ...]) -> np.ndarray:
    """Relabel wires: the content of qubit ``order[q]`` moves to qubit ``q``."""
    t = _tensor(amps, n_qubits)
    axes = [_axis(n_qubits, order[n_qubits - 1 - a]) for a in range(n_qubits)]
    axes += list(range(n_qubits, t.ndim))
    return np.ascontiguousarray(np.transpose(t, axes)).reshape(amps.shape)
