"""Tests for the quantum sawtooth map circuits and evolvers."""

import math

import numpy as np
import pytest

from src.circuits import dumps
from src.circuits.oracle import circuit_unitary, dft_matrix
from src.sawtooth import (
    Representation,
    SawtoothParams,
    SignedActionMap,
    action_probabilities,
    break_time,
    diffusion_coefficient,
    evolve_quantum,
    evolve_reference,
    initial_state,
    map_step_circuit,
    quantum_second_moments,
    uk_circuit,
    ut_circuit,
)
from src.sawtooth.services import kick_phases, rotation_phases, theta_grid


def dense_step(params: SawtoothParams, representation: Representation) -> np.ndarray:
    to_action = dft_matrix(params.n, inverse=True)
    kick = np.diag(kick_phases(params))
    rotate = np.diag(rotation_phases(params))
    if representation is Representation.THETA:
        return to_action.conj().T @ rotate @ to_action @ kick
    return rotate @ to_action @ kick @ to_action.conj().T


class TestSignedActionMap:
    def test_bijection(self):
        actions = SignedActionMap(n=4)
        values = actions.values()
        assert sorted(values.tolist()) == list(range(-8, 8))
        for i in range(16):
            assert actions.to_index(actions.to_m(i)) == i

    def test_ordering(self):
        actions = SignedActionMap(n=3)
        assert actions.values()[actions.ordered()].tolist() == list(range(-4, 4))


class TestParams:
    def test_classicality_is_product(self):
        params = SawtoothParams(n=3, k=0.273, T=1.5 / 0.273)
        assert params.K == params.k * params.T

    def test_from_classicality(self):
        params = SawtoothParams.from_classicality(n=3, K=1.5, k=0.273)
        assert params.K == pytest.approx(1.5)

    def test_m0_range(self):
        with pytest.raises(ValueError):
            SawtoothParams(n=3, k=1.0, T=1.0, m0=4)


class TestKickCircuit:
    def test_gate_count(self):
        assert uk_circuit(SawtoothParams(n=3, k=1.0, T=1.0)).gate_count == 9

    def test_zero_kick_is_identity(self):
        circuit = uk_circuit(SawtoothParams(n=3, k=0.0, T=1.0))
        assert all(p == 0.0 for op in circuit.ops for p in op.params)
        np.testing.assert_allclose(circuit_unitary(circuit), np.eye(8), atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_diagonal(self, n):
        params = SawtoothParams(n=n, k=0.83, T=1.0)
        expected = np.exp(0.5j * params.k * (theta_grid(n) - np.pi) ** 2)
        np.testing.assert_allclose(
            circuit_unitary(uk_circuit(params)), np.diag(expected), atol=1e-11
        )


class TestRotationCircuit:
    def test_gate_count(self):
        assert ut_circuit(SawtoothParams(n=4, k=1.0, T=1.0)).gate_count == 16

    def test_zero_period_is_identity(self):
        circuit = ut_circuit(SawtoothParams(n=3, k=1.0, T=0.0))
        np.testing.assert_allclose(circuit_unitary(circuit), np.eye(8), atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_signed_diagonal(self, n):
        params = SawtoothParams(n=n, k=1.0, T=0.377)
        m = SignedActionMap(n=n).values()
        expected = np.exp(-0.5j * params.T * m**2)
        np.testing.assert_allclose(
            circuit_unitary(ut_circuit(params)), np.diag(expected), atol=1e-11
        )


class TestMapStep:
    @pytest.mark.parametrize("n", range(1, 17))
    def test_gate_count(self, n):
        params = SawtoothParams(n=n, k=1.0, T=1.0)
        assert map_step_circuit(params).gate_count == 3 * n * n + n
        assert map_step_circuit(params, Representation.ACTION).gate_count == 3 * n * n + n

    def test_six_qubits(self):
        assert map_step_circuit(SawtoothParams(n=6, k=1.0, T=1.0)).gate_count == 114

    def test_one_qubit(self):
        assert map_step_circuit(SawtoothParams(n=1, k=1.0, T=1.0)).gate_count == 4

    def test_dump_has_one_line_per_gate(self):
        text = dumps(map_step_circuit(SawtoothParams(n=4, k=1.0, T=1.0)))
        assert len([line for line in text.splitlines() if not line.startswith("#")]) == 52

    @pytest.mark.parametrize("representation", list(Representation))
    def test_matches_dense_split_operator(self, representation, rng):
        for _ in range(20):
            n = int(rng.integers(1, 7))
            params = SawtoothParams(
                n=n, k=float(rng.uniform(-3, 3)), T=float(rng.uniform(-3, 3))
            )
            circuit = map_step_circuit(params, representation)
            error = np.max(np.abs(circuit_unitary(circuit) - dense_step(params, representation)))
            assert error < 1e-10


class TestEvolution:
    def test_zero_steps(self, random_state):
        params = SawtoothParams(n=4, k=1.0, T=1.0)
        state = random_state(4)
        original = state.amplitudes.copy()
        evolve_quantum(state, params, 0)
        np.testing.assert_array_equal(state.amplitudes, original)

    @pytest.mark.parametrize("m", [-8, -3, 0, 5])
    def test_free_rotation_phase(self, m):
        params = SawtoothParams(n=4, k=0.0, T=0.9, m0=m)
        state = initial_state(params)
        original = state.amplitudes.copy()
        evolve_quantum(state, params, 7)
        expected = np.exp(-0.5j * params.T * m * m * 7) * original
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize(("n", "steps"), [(3, 100), (5, 60), (8, 20)])
    def test_gate_and_reference_agree(self, n, steps, random_state, rng):
        params = SawtoothParams(n=n, k=float(rng.uniform(-2, 2)), T=float(rng.uniform(-2, 2)))
        state = random_state(n)
        reference = evolve_reference(state.copy(), params, steps)
        evolve_quantum(state, params, steps)
        np.testing.assert_allclose(state.amplitudes, reference.amplitudes, atol=1e-10)

    def test_action_representation_agrees(self):
        params = SawtoothParams.from_classicality(n=5, K=1.5, k=0.9, m0=3)
        theta = evolve_quantum(initial_state(params), params, 6)
        action = evolve_quantum(
            initial_state(params, Representation.ACTION), params, 6, Representation.ACTION
        )
        np.testing.assert_allclose(
            action_probabilities(theta),
            action_probabilities(action, Representation.ACTION),
            atol=1e-12,
        )

    def test_reference_free_rotor(self):
        params = SawtoothParams(n=6, k=0.0, T=0.4, m0=-7)
        state = evolve_reference(initial_state(params), params, 3)
        assert abs(np.vdot(initial_state(params).amplitudes, state.amplitudes)) == pytest.approx(1.0)
        np.testing.assert_allclose(
            state.amplitudes,
            np.exp(-0.5j * 0.4 * 49 * 3) * initial_state(params).amplitudes,
            atol=1e-12,
        )

    def test_reference_unitarity(self, random_state):
        params = SawtoothParams(n=7, k=1.3, T=0.7)
        state = evolve_reference(random_state(7), params, 1000)
        assert abs(state.norm() - 1.0) < 1e-10

    def test_initial_state_is_action_eigenstate(self):
        params = SawtoothParams(n=5, k=1.0, T=1.0, m0=-6)
        probs = action_probabilities(initial_state(params))
        assert probs[-6 % 32] == pytest.approx(1.0)

    @pytest.mark.slow
    def test_long_run_gate_vs_reference(self):
        n = 9
        N = 1 << n
        params = SawtoothParams.from_classicality(
            n=n, K=-0.1, k=-0.1 / (2 * math.pi / N), m0=math.floor(0.38 * N)
        )
        assert params.T == pytest.approx(2 * math.pi / N)
        gates = evolve_quantum(initial_state(params), params, 1000)
        reference = evolve_reference(initial_state(params), params, 1000)
        assert np.max(np.abs(gates.amplitudes - reference.amplitudes)) < 1e-6


SEMICLASSICAL = SawtoothParams.from_classicality(n=10, K=1.5, k=15.0)
STARTING_ACTIONS = (-40, -13, 0, 9, 31)
# Beyond this the spread starts to feel the 1024-level register.
DIFFUSIVE_HORIZON = 40


@pytest.fixture(scope="module")
def classical_spread():
    return diffusion_coefficient(SEMICLASSICAL, ensemble_size=100_000, t_max=50, seed=5)


@pytest.fixture(scope="module")
def quantum_spread():
    """Second moment averaged over several starting action eigenstates."""
    runs = [
        quantum_second_moments(
            SawtoothParams.from_classicality(n=10, K=1.5, k=15.0, m0=m0), t_max=1000
        )
        for m0 in STARTING_ACTIONS
    ]
    return np.mean(runs, axis=0)


@pytest.mark.slow
class TestCorrespondence:
    """Quantum diffusion follows the classical ensemble, then stops."""

    def test_tracks_classical_before_break_time(self, classical_spread, quantum_spread):
        D = classical_spread.D
        t_star = break_time(quantum_spread, D)
        assert t_star is not None
        assert t_star // 2 >= DIFFUSIVE_HORIZON
        for t in range(1, DIFFUSIVE_HORIZON + 1):
            assert quantum_spread[t] == pytest.approx(D * t, rel=0.2)

    def test_tracks_classical_moments(self, classical_spread, quantum_spread):
        for t in range(1, 11):
            assert quantum_spread[t] == pytest.approx(
                classical_spread.second_moments[t], rel=0.1
            )

    def test_saturates(self, classical_spread, quantum_spread):
        slope = (quantum_spread[1000] - quantum_spread[100]) / 900
        assert slope < 0.1 * classical_spread.D
