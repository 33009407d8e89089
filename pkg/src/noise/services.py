"""
Noisy execution of circuits: exact density matrices, stochastic trajectories,
readout confusion and the noisy localization experiment.

Noise is inserted after every counted gate on that gate's operand qubits:
first dephasing, then relaxation. Idle qubits are not touched.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.circuits import Circuit, run_on_array
from src.circuits.services import apply_op
from src.config import settings
from src.exceptions import CapacityError, DomainError
from src.rng import describe_seed, make_rng, spawn_seeds
from src.sawtooth import Representation, SawtoothParams, SignedActionMap
from src.sawtooth.services import map_step_circuit
from src.statevec import MeasurementRecord, StateVector, init_basis_state
from src.statevec import kernels

from .channels import (
    adjoint,
    check_probability,
    dephase_entries,
    dephase_trajectories,
    relax_entries,
    relax_trajectories,
)
from .schemas import DensityMatrix, LocalizationTable, NoiseMethod, NoiseParams, TrajectoryBatch

logger = logging.getLogger(__name__)


def _initial_amplitudes(circuit: Circuit, initial: StateVector | None) -> np.ndarray:
    if initial is None:
        return init_basis_state(circuit.n_qubits, 0).amplitudes
    if initial.n_qubits != circuit.n_qubits:
        raise DomainError(
            f"initial state has {initial.n_qubits} qubits, circuit has {circuit.n_qubits}"
        )
    return initial.amplitudes.copy()


def run_density(
    circuit: Circuit, noise: NoiseParams, initial: StateVector | None = None
) -> DensityMatrix:
    """Exact evolution of rho under the circuit with per-gate channels."""
    n = circuit.n_qubits
    if n > settings.MAX_DENSITY_QUBITS:
        raise CapacityError(
            f"density method is limited to {settings.MAX_DENSITY_QUBITS} qubits, "
            f"circuit has {n}"
        )
    eff = noise.effective()
    psi = _initial_amplitudes(circuit, initial)
    rho = np.outer(psi, psi.conj())
    for op in circuit.ops:
        rho = apply_op(rho, n, op)
        rho = adjoint(apply_op(adjoint(rho), n, op))
        if not op.is_gate:
            continue
        for q in op.operands:
            rho = dephase_entries(rho, n, q, eff.p_dephase)
            rho = relax_entries(rho, n, q, eff.p_relax)
    return DensityMatrix(n_qubits=n, entries=rho)


def _run_block(
    circuit: Circuit,
    noise: NoiseParams,
    psi0: np.ndarray,
    size: int,
    seed: np.random.SeedSequence,
    target: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, float, float]:
    n = circuit.n_qubits
    rng = make_rng(seed)
    amps = np.ascontiguousarray(np.repeat(psi0[:, None], size, axis=1))
    for op in circuit.ops:
        amps = apply_op(amps, n, op)
        if not op.is_gate:
            continue
        for q in op.operands:
            amps = dephase_trajectories(amps, n, q, noise.p_dephase, rng)
            amps = relax_trajectories(amps, n, q, noise.p_relax, rng)
    if circuit.global_phase != 0.0:
        amps *= np.exp(1j * circuit.global_phase)
    probs = np.abs(amps) ** 2
    fid_sum = fid_sq = 0.0
    if target is not None:
        fid = np.abs(target.conj() @ amps) ** 2
        fid_sum, fid_sq = float(fid.sum()), float(np.sum(fid**2))
    return probs.sum(axis=1), np.sum(probs**2, axis=1), fid_sum, fid_sq


def _mean_and_stderr(total, total_sq, count: int):
    mean = total / count
    if count < 2:
        return mean, np.zeros_like(mean)
    var = np.maximum(total_sq / count - mean**2, 0.0) * count / (count - 1)
    return mean, np.sqrt(var / count)


def run_trajectories(
    circuit: Circuit,
    noise: NoiseParams,
    count: int,
    seed: int,
    initial: StateVector | None = None,
    target: StateVector | None = None,
    threads: int | None = None,
) -> TrajectoryBatch:
    """Monte-Carlo unravelling in blocks of TRAJECTORY_BLOCK_SIZE columns.

    Block i always draws from child seed i of ``seed``, so the result does
    not depend on the number of worker threads.
    """
    if count < 1:
        raise DomainError(f"trajectory count must be positive, got {count}")
    eff = noise.effective()
    psi0 = _initial_amplitudes(circuit, initial)
    block = settings.TRAJECTORY_BLOCK_SIZE
    sizes = [min(block, count - start) for start in range(0, count, block)]
    seeds = spawn_seeds(seed, len(sizes))
    target_amps = None if target is None else target.amplitudes
    workers = min(threads or settings.THREADS, len(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(
            pool.map(
                lambda job: _run_block(circuit, eff, psi0, job[0], job[1], target_amps),
                zip(sizes, seeds, strict=True),
            )
        )
    probs_mean, probs_err = _mean_and_stderr(
        sum(r[0] for r in results), sum(r[1] for r in results), count
    )
    fidelity = fidelity_err = None
    if target is not None:
        fidelity, fidelity_err = _mean_and_stderr(
            sum(r[2] for r in results), sum(r[3] for r in results), count
        )
        fidelity, fidelity_err = float(fidelity), float(fidelity_err)
    return TrajectoryBatch(
        n_qubits=circuit.n_qubits,
        count=count,
        seeds=[describe_seed(s) for s in seeds],
        block_size=block,
        probabilities=probs_mean,
        probabilities_stderr=probs_err,
        fidelity=fidelity,
        fidelity_stderr=fidelity_err,
    )


def noisy_run(
    circuit: Circuit,
    noise: NoiseParams,
    method: NoiseMethod | str = NoiseMethod.DENSITY,
    trajectories: int = 1000,
    seed: int = 0,
    initial: StateVector | None = None,
    target: StateVector | None = None,
    threads: int | None = None,
) -> DensityMatrix | TrajectoryBatch:
    """Run ``circuit`` under ``noise`` with the density or trajectory method."""
    method = NoiseMethod(method)
    start = time.perf_counter()
    if method is NoiseMethod.DENSITY:
        result = run_density(circuit, noise, initial)
    else:
        result = run_trajectories(
            circuit, noise, trajectories, seed, initial, target, threads
        )
    logger.info(
        f"Noisy run ({method}) of {circuit.gate_count} gates on {circuit.n_qubits} qubits "
        f"in {time.perf_counter() - start:.2f}s"
    )
    return result


def auto_method(n_qubits: int) -> NoiseMethod:
    if n_qubits <= settings.MAX_DENSITY_QUBITS:
        return NoiseMethod.DENSITY
    return NoiseMethod.TRAJECTORIES


def apply_readout_error(
    data: MeasurementRecord | np.ndarray,
    p_readout: float,
    seed: int | None = None,
) -> MeasurementRecord | np.ndarray:
    """Flip every measured bit independently with probability ``p_readout``.

    Exact distributions are convolved with the bit-flip confusion product;
    measurement records are resampled shot by shot and need a seed.
    """
    check_probability("p_readout", p_readout)
    if isinstance(data, MeasurementRecord):
        if p_readout == 0.0:
            return data
        if seed is None:
            raise DomainError("flipping a measurement record needs a seed")
        outcomes = np.repeat(
            np.fromiter(data.counts.keys(), dtype=np.int64),
            np.fromiter(data.counts.values(), dtype=np.int64),
        )
        flips = make_rng(seed).random((data.shots, data.n_qubits)) < p_readout
        masks = flips.astype(np.int64) @ (1 << np.arange(data.n_qubits, dtype=np.int64))
        values, counts = np.unique(outcomes ^ masks, return_counts=True)
        return data.model_copy(
            update={"counts": {int(v): int(c) for v, c in zip(values, counts, strict=True)}}
        )

    probs = np.ascontiguousarray(data, dtype=float)
    n = int(math.log2(probs.size))
    if probs.size != 1 << n:
        raise DomainError(f"distribution of length {probs.size} is not a register")
    if p_readout == 0.0:
        return probs.copy()
    confusion = np.array([[1.0 - p_readout, p_readout], [p_readout, 1.0 - p_readout]])
    for q in range(n):
        probs = kernels.apply_single_qubit_matrix(probs, n, q, confusion)
    return probs


def map_circuit(params: SawtoothParams, t: int) -> Circuit:
    """t action-representation map steps as one circuit."""
    step = map_step_circuit(params, Representation.ACTION)
    return Circuit(n_qubits=params.n, ops=step.ops * t, label=f"{step.label} t={t}")


def localization_experiment(
    params: SawtoothParams,
    noise: NoiseParams,
    t: int = 1,
    shots: int = 8192,
    repetitions: int = 10,
    seed: int = 0,
    method: NoiseMethod | str | None = None,
    trajectories: int = 10000,
    threads: int | None = None,
) -> LocalizationTable:
    """W_m after t steps from |m0>: noiseless, noisy exact and noisy sampled.

    The noisy-exact column includes readout confusion. Each repetition draws
    ``shots`` outcomes from the noisy distribution before readout and flips
    the recorded bits; the sampled columns are mean and spread across
    repetitions.
    """
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if shots < 1 or repetitions < 1:
        raise DomainError(f"shots and repetitions must be positive, got {shots}, {repetitions}")
    circuit = map_circuit(params, t)
    method = NoiseMethod(method) if method is not None else auto_method(params.n)
    initial = init_basis_state(params.n, params.m0 % params.N)

    noiseless = np.abs(run_on_array(initial.amplitudes.copy(), circuit)) ** 2
    run_seed, *rep_seeds = spawn_seeds(seed, repetitions + 1)
    result = noisy_run(
        circuit,
        noise,
        method,
        trajectories=trajectories,
        seed=int(run_seed.generate_state(1)[0]),
        initial=initial,
        threads=threads,
    )
    if isinstance(result, DensityMatrix):
        noisy = result.probabilities()
    else:
        noisy = result.probabilities
    noisy = noisy / noisy.sum()
    p_readout = noise.effective().p_readout
    exact = apply_readout_error(noisy, p_readout)

    samples = []
    for rep in rep_seeds:
        draw_seed, flip_seed = (int(s.generate_state(1)[0]) for s in rep.spawn(2))
        draws = make_rng(draw_seed).multinomial(shots, noisy)
        record = MeasurementRecord(
            n_qubits=params.n,
            shots=shots,
            counts={int(k): int(c) for k, c in enumerate(draws) if c > 0},
            seed=draw_seed,
        )
        record = apply_readout_error(record, p_readout, seed=flip_seed)
        samples.append(record.frequencies())
    samples = np.array(samples)

    order = SignedActionMap(n=params.n).ordered()
    table = LocalizationTable(
        m=SignedActionMap(n=params.n).values()[order],
        W_noiseless=noiseless[order],
        W_noisy_exact=exact[order],
        W_sampled_mean=samples.mean(axis=0)[order],
        W_sampled_std=samples.std(axis=0)[order],
        shots=shots,
        repetitions=repetitions,
        seeds=[describe_seed(s) for s in [run_seed, *rep_seeds]],
        method=method,
    )
    logger.info(
        f"Localization experiment n={params.n}, t={t}: noiseless peak "
        f"{table.peak('W_noiseless'):.4f}, noisy peak {table.peak():.4f}"
    )
    return table
