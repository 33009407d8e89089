"""Tests for noise channels, noisy execution and the noisy localization experiment."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.circuits import Circuit, run_on_array
from src.circuits.builders import hadamard
from src.config import settings
from src.exceptions import CapacityError, DomainError
from src.noise import (
    Channel,
    DensityMatrix,
    NoiseMethod,
    NoiseParams,
    apply_channel,
    apply_readout_error,
    localization_experiment,
    map_circuit,
    noisy_run,
)
from src.sawtooth import SawtoothParams
from src.statevec import MeasurementRecord, StateVector, init_basis_state

PLUS = StateVector(n_qubits=1, amplitudes=np.array([1.0, 1.0]) / math.sqrt(2))
SMALL_CHAOTIC = SawtoothParams.from_classicality(n=3, K=1.5, k=0.273, m0=0)
SMALL_NOISE = NoiseParams(p_dephase=0.02, p_relax=0.01, p_readout=0.02)


def random_density(rng, n: int) -> DensityMatrix:
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return DensityMatrix(n_qubits=n, entries=rho / np.trace(rho))


class TestNoiseParams:
    def test_range(self):
        with pytest.raises(ValidationError):
            NoiseParams(p_dephase=1.5)

    def test_inflation_clipped(self):
        eff = NoiseParams(p_dephase=0.6, p_relax=0.1, inflation=2.0).effective()
        assert eff.p_dephase == 1.0
        assert eff.p_relax == pytest.approx(0.2)
        assert eff.inflation == 1.0

    def test_noiseless(self):
        assert NoiseParams().is_noiseless
        assert NoiseParams(p_readout=0.1, inflation=0.0).is_noiseless
        assert not NoiseParams(p_relax=0.1).is_noiseless


class TestChannels:
    @pytest.mark.parametrize("channel", list(Channel))
    def test_zero_is_identity(self, channel, rng):
        rho = random_density(rng, 3)
        out = apply_channel(rho, channel, 1, 0.0)
        np.testing.assert_array_equal(out.entries, rho.entries)

    def test_full_dephasing(self):
        out = apply_channel(DensityMatrix.from_state(PLUS), Channel.DEPHASE, 0, 0.5)
        assert abs(out.entries[0, 1]) < 1e-15
        np.testing.assert_allclose(np.diagonal(out.entries).real, [0.5, 0.5])

    def test_full_decay(self):
        one = DensityMatrix.from_state(init_basis_state(1, 1))
        out = apply_channel(one, Channel.RELAX, 0, 1.0)
        np.testing.assert_allclose(out.entries, [[1, 0], [0, 0]], atol=1e-15)

    def test_partial_decay_closed_form(self):
        out = apply_channel(DensityMatrix.from_state(PLUS), Channel.RELAX, 0, 0.3)
        expected = np.array([[0.5 + 0.15, 0.5 * math.sqrt(0.7)], [0.5 * math.sqrt(0.7), 0.35]])
        np.testing.assert_allclose(out.entries, expected, atol=1e-15)

    def test_parameter_range(self, rng):
        with pytest.raises(DomainError):
            apply_channel(random_density(rng, 2), Channel.DEPHASE, 0, 1.2)
        with pytest.raises(DomainError):
            apply_channel(random_density(rng, 2), Channel.RELAX, 5, 0.1)

    def test_sequence_keeps_physical(self, rng):
        rho = random_density(rng, 3)
        for _ in range(50):
            channel = Channel.DEPHASE if rng.random() < 0.5 else Channel.RELAX
            rho = apply_channel(rho, channel, int(rng.integers(3)), float(rng.random()))
        assert abs(rho.trace() - 1.0) < 1e-10
        assert rho.hermiticity_error() < 1e-12
        assert rho.min_eigenvalue() > -1e-10


class TestNoisyRun:
    def test_zero_noise_density_is_projector(self):
        circuit = map_circuit(SMALL_CHAOTIC, 2)
        initial = init_basis_state(3, 0)
        pure = run_on_array(initial.amplitudes.copy(), circuit)
        rho = noisy_run(circuit, NoiseParams(), initial=initial)
        np.testing.assert_allclose(rho.entries, np.outer(pure, pure.conj()), atol=1e-12)

    def test_zero_noise_trajectories_are_pure(self):
        circuit = map_circuit(SMALL_CHAOTIC, 1)
        pure = np.abs(run_on_array(init_basis_state(3, 0).amplitudes.copy(), circuit)) ** 2
        batch = noisy_run(circuit, NoiseParams(), NoiseMethod.TRAJECTORIES, trajectories=64)
        np.testing.assert_allclose(batch.probabilities, pure, atol=1e-12)
        assert np.all(batch.probabilities_stderr < 1e-7)

    def test_hadamard_coherence(self):
        circuit = Circuit(n_qubits=1, ops=(hadamard(0),))
        rho = noisy_run(circuit, NoiseParams(p_dephase=0.1))
        assert rho.entries[0, 1].real == pytest.approx((1 - 2 * 0.1) * 0.5)
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)

    def test_density_capacity(self):
        wide = Circuit(n_qubits=settings.MAX_DENSITY_QUBITS + 1, ops=(hadamard(0),))
        with pytest.raises(CapacityError):
            noisy_run(wide, NoiseParams(p_dephase=0.1))

    def test_worker_count_does_not_change_result(self, monkeypatch):
        monkeypatch.setattr(settings, "TRAJECTORY_BLOCK_SIZE", 100)
        circuit = map_circuit(SMALL_CHAOTIC, 1)
        noise = NoiseParams(p_dephase=0.05, p_relax=0.05)
        one = noisy_run(circuit, noise, "trajectories", trajectories=1000, seed=4, threads=1)
        four = noisy_run(circuit, noise, "trajectories", trajectories=1000, seed=4, threads=4)
        np.testing.assert_array_equal(one.probabilities, four.probabilities)
        assert len(one.seeds) == 10

    def test_trajectories_match_density(self):
        circuit = map_circuit(SMALL_CHAOTIC, 1)
        noise = NoiseParams(p_dephase=0.01, p_relax=0.01)
        rho = noisy_run(circuit, noise)
        batch = noisy_run(circuit, noise, "trajectories", trajectories=100_000, seed=11)
        diff = np.abs(batch.probabilities - rho.probabilities())
        assert np.all(diff <= 3 * batch.probabilities_stderr + 1e-12)

    def test_target_fidelity(self):
        circuit = Circuit(n_qubits=1, ops=(hadamard(0),))
        noise = NoiseParams(p_dephase=0.1)
        rho = noisy_run(circuit, noise)
        batch = noisy_run(circuit, noise, "trajectories", trajectories=100_000, seed=2, target=PLUS)
        expected = rho.fidelity_with(PLUS)
        assert expected == pytest.approx(0.9)
        assert abs(batch.fidelity - expected) <= 3 * batch.fidelity_stderr

    @pytest.mark.slow
    def test_unravelling_convergence_rate(self):
        circuit = map_circuit(SMALL_CHAOTIC, 1)
        noise = NoiseParams(p_dephase=0.01, p_relax=0.01)
        rho = noisy_run(circuit, noise)
        errors = {}
        for count in (1000, 10000, 100000):
            batch = noisy_run(circuit, noise, "trajectories", trajectories=count, seed=8)
            diff = np.abs(batch.probabilities - rho.probabilities())
            assert np.all(diff <= 3 * batch.probabilities_stderr + 1e-12)
            errors[count] = batch.probabilities_stderr.max()
        assert errors[1000] / errors[100000] == pytest.approx(10.0, rel=0.2)


class TestReadout:
    def test_zero_unchanged(self):
        probs = np.array([0.5, 0.25, 0.125, 0.125])
        np.testing.assert_array_equal(apply_readout_error(probs, 0.0), probs)

    def test_maximal_confusion(self):
        probs = np.zeros(8)
        probs[0] = 1.0
        np.testing.assert_allclose(apply_readout_error(probs, 0.5), np.full(8, 1 / 8))

    def test_single_qubit(self):
        np.testing.assert_allclose(apply_readout_error(np.array([1.0, 0.0]), 0.1), [0.9, 0.1])

    def test_record_full_flip(self):
        record = MeasurementRecord(n_qubits=3, shots=10, counts={0: 10}, seed=1)
        assert apply_readout_error(record, 1.0, seed=5).counts == {7: 10}
        assert apply_readout_error(record, 0.0) is record

    def test_record_needs_seed(self):
        record = MeasurementRecord(n_qubits=1, shots=4, counts={1: 4}, seed=1)
        with pytest.raises(DomainError):
            apply_readout_error(record, 0.2)

    def test_record_statistics(self):
        record = MeasurementRecord(n_qubits=2, shots=20000, counts={0: 20000}, seed=1)
        flipped = apply_readout_error(record, 0.1, seed=9)
        assert flipped.shots == 20000
        assert flipped.frequencies()[0] == pytest.approx(0.81, abs=0.015)


class TestLocalizationExperiment:
    def test_noiseless_consistency(self):
        table = localization_experiment(SMALL_CHAOTIC, NoiseParams(), shots=8192, repetitions=10, seed=1)
        np.testing.assert_allclose(table.W_noisy_exact, table.W_noiseless, atol=1e-12)
        W = table.W_noiseless
        tolerance = 5 * np.sqrt(W * (1 - W) / (8192 * 10)) + 1e-9
        assert np.all(np.abs(table.W_sampled_mean - W) <= tolerance)
        assert table.m.tolist() == list(range(-4, 4))

    def test_peak_at_m0(self):
        table = localization_experiment(SMALL_CHAOTIC, NoiseParams(), seed=0)
        assert table.m[np.argmax(table.W_noiseless)] == 0

    @pytest.mark.parametrize("seed", [3, 4, 5, 6, 7])
    def test_noise_suppresses_peak(self, seed):
        table = localization_experiment(SMALL_CHAOTIC, SMALL_NOISE, seed=seed)
        assert table.peak() < table.peak("W_noiseless")
        assert table.peak("W_sampled_mean") < table.peak("W_noiseless")
        assert len(table.rows()) == 8
        assert len(table.seeds) == 11
        assert table.method is NoiseMethod.DENSITY

    def test_more_dephasing_lowers_peak(self):
        peaks = []
        for p in (0.01, 0.02, 0.04):
            noise = NoiseParams(p_dephase=p, p_relax=0.01)
            peaks.append(localization_experiment(SMALL_CHAOTIC, noise, repetitions=2, seed=5).peak())
        assert peaks[0] >= peaks[1] >= peaks[2]

    def test_final_state_positive(self):
        rho = noisy_run(map_circuit(SMALL_CHAOTIC, 1), SMALL_NOISE, initial=init_basis_state(3, 0))
        assert rho.min_eigenvalue() >= -1e-8
        assert abs(rho.trace() - 1.0) < 1e-10

    def test_reproducible(self):
        first = localization_experiment(SMALL_CHAOTIC, SMALL_NOISE, shots=1000, repetitions=3, seed=12)
        second = localization_experiment(SMALL_CHAOTIC, SMALL_NOISE, shots=1000, repetitions=3, seed=12)
        np.testing.assert_array_equal(first.W_sampled_mean, second.W_sampled_mean)

    def test_invalid_shots(self):
        with pytest.raises(DomainError):
            localization_experiment(SMALL_CHAOTIC, NoiseParams(), shots=0)
