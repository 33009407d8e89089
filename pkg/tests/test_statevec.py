"""Tests for state-vector storage, gates, expectations and sampling."""

import math

import numpy as np
import pytest

from src.circuits import GateKind, GateOp
from src.circuits.oracle import gate_unitary
from src.circuits.services import apply_op
from src.exceptions import CapacityError, DomainError
from src.statevec import (
    BasisIndex,
    PauliAxis,
    StateVector,
    apply_cnot,
    apply_hadamard,
    apply_pauli_x,
    apply_pauli_z,
    apply_phase_shift,
    apply_two_qubit_diagonal,
    expectation_pauli,
    init_basis_state,
    norm_drift,
    overlap,
    renormalize,
    sample_measurements,
)


def ket(*amps) -> StateVector:
    amps = np.asarray(amps, dtype=complex)
    return StateVector(n_qubits=int(math.log2(amps.size)), amplitudes=amps)


class TestBasisStates:
    def test_single_qubit_zero(self):
        np.testing.assert_array_equal(init_basis_state(1, 0).amplitudes, [1, 0])

    def test_three_qubit_five(self):
        state = init_basis_state(3, 5)
        expected = np.zeros(8)
        expected[5] = 1
        np.testing.assert_array_equal(state.amplitudes, expected)
        assert BasisIndex(value=5, n_qubits=3).bits == (1, 0, 1)
        assert BasisIndex(value=5, n_qubits=3).bitstring() == "101"

    def test_out_of_range_index(self):
        with pytest.raises(DomainError):
            init_basis_state(2, 4)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            init_basis_state(64, 0)

    def test_basis_index_round_trip(self):
        index = BasisIndex.from_bits([1, 1, 0, 1])
        assert index.value == 11
        assert index.bits == (1, 1, 0, 1)


class TestGates:
    def test_pauli_x_flips_one_bit(self):
        state = apply_pauli_x(init_basis_state(3, 0), 1)
        assert np.argmax(np.abs(state.amplitudes)) == 2

    def test_pauli_z_signs_the_one_branch(self):
        state = apply_pauli_z(init_basis_state(3, 2), 1)
        assert state.amplitudes[2] == -1
        apply_pauli_z(state, 0)
        assert state.amplitudes[2] == -1

    def test_hadamard_on_zero(self):
        state = apply_hadamard(init_basis_state(1, 0), 0)
        np.testing.assert_allclose(state.amplitudes, [1 / np.sqrt(2)] * 2, atol=1e-15)

    def test_hadamard_twice_is_identity(self, random_state):
        state = random_state(4)
        original = state.amplitudes.copy()
        apply_hadamard(apply_hadamard(state, 2), 2)
        np.testing.assert_allclose(state.amplitudes, original, atol=1e-12)

    def test_hadamard_layer_uniform(self):
        state = init_basis_state(3, 0)
        for q in range(3):
            apply_hadamard(state, q)
        np.testing.assert_allclose(state.amplitudes, np.full(8, 1 / np.sqrt(8)), atol=1e-12)

    def test_phase_shift_pi_on_one(self):
        state = apply_phase_shift(init_basis_state(1, 1), 0, math.pi)
        np.testing.assert_allclose(state.amplitudes, [0, -1], atol=1e-15)

    def test_phase_shift_leaves_zero(self):
        state = apply_phase_shift(init_basis_state(1, 0), 0, 1.234)
        np.testing.assert_array_equal(state.amplitudes, [1, 0])

    def test_phase_shift_on_plus(self):
        state = ket(1 / np.sqrt(2), 1 / np.sqrt(2))
        apply_phase_shift(state, 0, math.pi / 2)
        np.testing.assert_allclose(state.amplitudes, [1 / np.sqrt(2), 1j / np.sqrt(2)], atol=1e-15)

    def test_phase_shift_rejects_nan(self):
        with pytest.raises(DomainError):
            apply_phase_shift(init_basis_state(1, 0), 0, float("nan"))

    def test_cnot_truth_table(self):
        # |q1 q0>: control is the left qubit (q1), target q0
        assert np.argmax(np.abs(apply_cnot(init_basis_state(2, 0b10), 1, 0).amplitudes)) == 0b11
        assert np.argmax(np.abs(apply_cnot(init_basis_state(2, 0b01), 1, 0).amplitudes)) == 0b01

    def test_cnot_makes_bell_state(self):
        state = ket(1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0)
        apply_cnot(state, 1, 0)
        np.testing.assert_allclose(
            state.amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-15
        )

    def test_cnot_same_operands(self):
        with pytest.raises(DomainError):
            apply_cnot(init_basis_state(2, 0), 1, 1)

    def test_gate_qubit_out_of_range(self):
        with pytest.raises(DomainError):
            apply_hadamard(init_basis_state(2, 0), 2)

    def test_diagonal_zero_phases(self, random_state):
        state = random_state(3)
        original = state.amplitudes.copy()
        apply_two_qubit_diagonal(state, 0, 2, [0, 0, 0, 0])
        np.testing.assert_array_equal(state.amplitudes, original)

    def test_diagonal_controlled_z(self):
        state = apply_two_qubit_diagonal(init_basis_state(2, 3), 0, 1, [0, 0, 0, math.pi])
        np.testing.assert_allclose(state.amplitudes, [0, 0, 0, -1], atol=1e-15)

    def test_diagonal_sawtooth_factor(self):
        # exponent 2 pi^2 k (a_1/2 - 1/4)(a_2/4 - 1/4), n=2, k=1; a_1 is qubit 1
        def phi(a1, a2):
            return 2 * math.pi**2 * (a1 / 2 - 0.25) * (a2 / 4 - 0.25)

        phases = [phi(a, b) for a in (0, 1) for b in (0, 1)]
        for index in range(4):
            a1, a2 = (index >> 1) & 1, index & 1
            state = apply_two_qubit_diagonal(init_basis_state(2, index), 1, 0, phases)
            assert state.amplitudes[index] == pytest.approx(np.exp(1j * phi(a1, a2)), abs=1e-14)

    def test_diagonal_same_qubit(self):
        state = ket(1 / np.sqrt(2), 1 / np.sqrt(2))
        apply_two_qubit_diagonal(state, 0, 0, [0.3, 9.0, 9.0, 1.1])
        expected = np.array([np.exp(0.3j), np.exp(1.1j)]) / np.sqrt(2)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


GATES = [
    GateOp(kind=GateKind.HADAMARD, operands=(2,)),
    GateOp(kind=GateKind.PHASE_SHIFT, operands=(0,), params=(0.7,)),
    GateOp(kind=GateKind.CNOT, operands=(3, 1)),
    GateOp(kind=GateKind.CNOT, operands=(0, 4)),
    GateOp(kind=GateKind.CONTROLLED_PHASE, operands=(4, 2), params=(1.3,)),
    GateOp(kind=GateKind.TWO_QUBIT_DIAGONAL, operands=(1, 3), params=(0.1, -0.4, 2.2, 0.9)),
    GateOp(kind=GateKind.TWO_QUBIT_DIAGONAL, operands=(3, 1), params=(0.1, -0.4, 2.2, 0.9)),
    GateOp(kind=GateKind.TWO_QUBIT_DIAGONAL, operands=(2, 2), params=(0.5, 0.0, 0.0, -1.0)),
]


class TestProperties:
    @pytest.mark.parametrize("op", GATES, ids=lambda op: f"{op.kind}{op.operands}")
    def test_matches_kronecker_oracle(self, op, random_state):
        state = random_state(5)
        expected = gate_unitary(op, 5) @ state.amplitudes
        result = apply_op(state.amplitudes.copy(), 5, op)
        np.testing.assert_allclose(result, expected, atol=1e-12)

    @pytest.mark.parametrize("op", GATES, ids=lambda op: f"{op.kind}{op.operands}")
    def test_linearity(self, op, random_state):
        u, v = random_state(5).amplitudes, random_state(5).amplitudes
        alpha, beta = 0.3 - 0.8j, -1.1 + 0.2j
        combined = apply_op(alpha * u + beta * v, 5, op)
        separate = alpha * apply_op(u.copy(), 5, op) + beta * apply_op(v.copy(), 5, op)
        np.testing.assert_allclose(combined, separate, atol=1e-12)

    def test_norm_preserved_over_many_gates(self, random_state, rng):
        state = random_state(6)
        for _ in range(500):
            q = int(rng.integers(6))
            apply_hadamard(state, q)
            apply_phase_shift(state, q, float(rng.uniform(0, 2 * np.pi)))
            apply_cnot(state, q, (q + 1) % 6)
        assert abs(state.norm() - 1.0) < 1e-10

    def test_batch_axes(self, random_state):
        batch = np.stack([random_state(3).amplitudes for _ in range(4)], axis=1)
        op = GATES[0].model_copy(update={"operands": (1,)})
        expected = gate_unitary(op, 3) @ batch
        np.testing.assert_allclose(apply_op(batch.copy(), 3, op), expected, atol=1e-12)


class TestExpectations:
    def test_z_on_zero(self):
        assert expectation_pauli(init_basis_state(1, 0), 0, PauliAxis.Z) == pytest.approx(1.0)

    def test_x_on_plus(self):
        state = ket(1 / np.sqrt(2), 1 / np.sqrt(2))
        assert expectation_pauli(state, 0, "x") == pytest.approx(1.0)

    def test_y_on_phased_plus(self):
        state = ket(1 / np.sqrt(2), np.exp(1j * math.pi / 3) / np.sqrt(2))
        assert expectation_pauli(state, 0, "y") == pytest.approx(math.sin(math.pi / 3))

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_against_dense_pauli(self, axis, random_state):
        paulis = {
            "x": np.array([[0, 1], [1, 0]]),
            "y": np.array([[0, -1j], [1j, 0]]),
            "z": np.diag([1, -1]),
        }
        state = random_state(4)
        op = np.kron(np.kron(np.eye(2), paulis[axis]), np.eye(4))  # qubit 2
        expected = np.vdot(state.amplitudes, op @ state.amplitudes).real
        assert expectation_pauli(state, 2, axis) == pytest.approx(expected, abs=1e-12)


class TestSampling:
    def test_basis_state_is_deterministic(self):
        record = sample_measurements(init_basis_state(3, 5), 100, seed=1)
        assert record.counts == {5: 100}

    def test_bell_state_statistics(self):
        state = ket(1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2))
        record = sample_measurements(state, 8192, seed=7)
        assert set(record.counts) <= {0, 3}
        sigma = math.sqrt(8192 * 0.25)
        assert abs(record.counts[0] - 4096) < 5 * sigma

    def test_uniform_statistics(self):
        state = ket(0.5, 0.5, 0.5, 0.5)
        record = sample_measurements(state, 10**6, seed=3)
        sigma = math.sqrt(10**6 * 0.25 * 0.75)
        for k in range(4):
            assert abs(record.counts[k] - 250_000) < 5 * sigma

    def test_same_seed_same_record(self, random_state):
        state = random_state(4)
        assert sample_measurements(state, 500, 11) == sample_measurements(state, 500, 11)

    def test_rejects_zero_shots(self):
        with pytest.raises(DomainError):
            sample_measurements(init_basis_state(1, 0), 0, 1)


class TestOverlap:
    def test_self_overlap(self):
        assert overlap(init_basis_state(3, 6), init_basis_state(3, 6)) == 1

    def test_orthogonal(self):
        assert overlap(init_basis_state(1, 0), init_basis_state(1, 1)) == 0

    def test_summation_oracle(self, random_state):
        a, b = random_state(5), random_state(5)
        expected = sum(np.conj(x) * y for x, y in zip(a.amplitudes, b.amplitudes, strict=True))
        assert abs(overlap(a, b) - expected) < 1e-14
        assert abs(overlap(a, b)) <= 1 + 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            overlap(init_basis_state(2, 0), init_basis_state(3, 0))


def test_renormalize_is_explicit():
    state = StateVector(n_qubits=1, amplitudes=np.array([3.0, 4.0]))
    assert state.norm() == pytest.approx(25.0)
    renormalize(state)
    np.testing.assert_allclose(state.amplitudes, [0.6, 0.8])


def test_norm_drift():
    assert norm_drift(init_basis_state(2, 1)) == pytest.approx(0.0, abs=1e-15)
    state = StateVector(n_qubits=1, amplitudes=np.array([3.0, 4.0]))
    assert norm_drift(state) > 1.0
