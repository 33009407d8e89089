"""
Quantum volume log2 V_Q = floor(max_{kappa <= n} min(kappa, d(kappa))),
d(kappa) = 1 / (kappa eps_eff(kappa)), and an eps_eff estimator from layered
random two-qubit circuits run under the noise model.
"""

import logging
import math

import numpy as np
from scipy.stats import linregress

from src.circuits import Circuit, run_on_array
from src.circuits.builders import cnot, hadamard, phase_shift
from src.circuits.schemas import GateOp
from src.exceptions import DomainError, FitError
from src.noise import NoiseParams, TrajectoryBatch, auto_method, noisy_run
from src.rng import make_rng, spawn_seeds
from src.statevec import StateVector, init_basis_state

from .schemas import EpsEffEstimate, QVolumeInput, QVolumeReport, QVolumeRow

logger = logging.getLogger(__name__)

Z_95 = 1.959963984540054


def quantum_volume(spec: QVolumeInput) -> QVolumeReport:
    rows = []
    for kappa in range(1, spec.n + 1):
        eps = spec.eps(kappa)
        if not eps > 0:
            raise DomainError(f"eps_eff({kappa}) must be positive, got {eps}")
        depth = 1.0 / (kappa * eps)
        rows.append(
            QVolumeRow(kappa=kappa, eps_eff=eps, depth=depth, achievable=min(kappa, depth))
        )
    best = max(rows, key=lambda row: row.achievable)
    log2_vq = math.floor(best.achievable + 1e-9)
    return QVolumeReport(
        log2_VQ=log2_vq, VQ=volume_from_log2(log2_vq), best_kappa=best.kappa, table=rows
    )


def volume_from_log2(log2_vq: int) -> int:
    return 1 << log2_vq


def log2_from_volume(vq: int) -> int:
    if vq < 1 or vq & (vq - 1):
        raise DomainError(f"quantum volume must be a power of two, got {vq}")
    return vq.bit_length() - 1


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed U(dim) from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """(a, b, c) with u = e^(i alpha) Rz(a) Ry(b) Rz(c)."""
    su = u / np.sqrt(np.linalg.det(u))
    b = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    plus = np.angle(su[1, 1]) - np.angle(su[0, 0])
    minus = np.angle(su[1, 0]) - np.angle(-su[0, 1])
    return (plus + minus) / 2.0, b, (plus - minus) / 2.0


def single_qubit_ops(q: int, u: np.ndarray) -> list[GateOp]:
    """u up to a global phase as Rz(c), Ry(b), Rz(a) in {H, P}.

    Rz is P up to phase and Ry(b) = S H Rz(b) H S^dagger.
    """
    a, b, c = zyz_angles(u)
    return [
        phase_shift(q, c),
        phase_shift(q, -math.pi / 2),
        hadamard(q),
        phase_shift(q, b),
        hadamard(q),
        phase_shift(q, math.pi / 2),
        phase_shift(q, a),
    ]


def random_two_qubit_block(i: int, j: int, rng: np.random.Generator) -> list[GateOp]:
    """Three CNOTs interleaved with four layers of Haar-random local unitaries.

    Every U(4) is reachable with this template; the locals are Haar, the
    block as a whole is not.
    """
    ops: list[GateOp] = []
    for layer in range(4):
        ops += single_qubit_ops(i, haar_unitary(2, rng))
        ops += single_qubit_ops(j, haar_unitary(2, rng))
        if layer < 3:
            ops.append(cnot(i, j) if layer % 2 == 0 else cnot(j, i))
    return ops


def random_volume_circuit(kappa: int, depth: int, rng: np.random.Generator) -> Circuit:
    """``depth`` layers, each a random pairing of the kappa qubits into blocks."""
    if kappa < 2:
        raise DomainError(f"random two-qubit layers need kappa >= 2, got {kappa}")
    ops: list[GateOp] = []
    for _ in range(depth):
        perm = rng.permutation(kappa)
        for p in range(kappa // 2):
            ops += random_two_qubit_block(int(perm[2 * p]), int(perm[2 * p + 1]), rng)
    return Circuit(n_qubits=kappa, ops=tuple(ops), label=f"volume kappa={kappa} depth={depth}")


def _fidelity(circuit: Circuit, noise: NoiseParams, seed: int, trajectories: int) -> float:
    start = init_basis_state(circuit.n_qubits, 0)
    ideal = StateVector(
        n_qubits=circuit.n_qubits, amplitudes=run_on_array(start.amplitudes.copy(), circuit)
    )
    result = noisy_run(
        circuit,
        noise,
        auto_method(circuit.n_qubits),
        trajectories=trajectories,
        seed=seed,
        initial=start,
        target=ideal,
    )
    if isinstance(result, TrajectoryBatch):
        return float(result.fidelity)
    return result.fidelity_with(ideal)


def estimate_eps_eff(
    kappa: int,
    noise: NoiseParams,
    sequences: int,
    depth_grid: list[int],
    seed: int,
    trajectories: int = 2000,
) -> EpsEffEstimate:
    """Fit ln F = ln A + g ln(1 - eps) over every (sequence, depth) sample."""
    if kappa < 2:
        raise DomainError(f"eps_eff estimation needs kappa >= 2, got {kappa}")
    if sequences < 1 or not depth_grid:
        raise DomainError("need at least one sequence and one depth")
    gates, fidelities = [], []
    child_seeds = spawn_seeds(seed, sequences * len(depth_grid))
    for child, depth in zip(child_seeds, depth_grid * sequences, strict=True):
        circuit_seed, run_seed = child.spawn(2)
        circuit = random_volume_circuit(kappa, depth, make_rng(circuit_seed))
        fid = _fidelity(circuit, noise, int(run_seed.generate_state(1)[0]), trajectories)
        gates.append(circuit.gate_count)
        fidelities.append(fid)

    g = np.asarray(gates, dtype=float)
    f = np.asarray(fidelities)
    if np.ptp(g) == 0:
        raise FitError("fidelity decay needs at least two distinct gate counts")
    if np.any(f <= 0):
        raise FitError("fidelity reached zero; use shallower depths")
    fit = linregress(g, np.log(f))
    eps = -math.expm1(fit.slope)
    if eps < -1e-9:
        raise FitError(f"fidelity grows with gate count (eps = {eps:.3g})")
    estimate = EpsEffEstimate(
        kappa=kappa,
        eps=eps,
        ci_low=-math.expm1(fit.slope + Z_95 * fit.stderr),
        ci_high=-math.expm1(fit.slope - Z_95 * fit.stderr),
        stderr=fit.stderr,
        amplitude=math.exp(fit.intercept),
        r_squared=fit.rvalue**2,
        gate_counts=gates,
        fidelities=fidelities,
        sequences=sequences,
        seed=seed,
    )
    logger.info(
        f"eps_eff(kappa={kappa}) = {eps:.4g} "
        f"[{estimate.ci_low:.4g}, {estimate.ci_high:.4g}] from {len(gates)} circuits"
    )
    return estimate
