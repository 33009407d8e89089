"""
Experiment runner: turns a validated ``ExperimentConfig`` into a data CSV, a
JSON sidecar and, for circuit dumps, a text circuit file.
"""

import logging
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from src.artifacts import format_value, write_csv, write_sidecar
from src.circuits import Circuit, dumps, lower_to_universal, qft_circuit
from src.noise import NoiseParams, localization_experiment, map_circuit
from src.observables import (
    ActionDistribution,
    HusimiSpec,
    action_distribution,
    fidelity_decay,
    loschmidt_circuit,
    time_averaged_husimi,
)
from src.qvolume import (
    QVolumeInput,
    QVolumeReport,
    estimate_eps_eff,
    quantum_volume,
)
from src.sawtooth import (
    Representation,
    SawtoothParams,
    break_time,
    diffusion_coefficient,
    evolve_quantum,
    evolve_reference,
    initial_state,
    map_step_circuit,
    quantum_second_moments,
)
from src.schrodinger import (
    EvolutionSettings,
    QuadraticPotential,
    SpatialGrid,
    band_mass,
    discretize,
    split_step_reference,
    trotter_evolve,
)
from src.schrodinger.services import gaussian

from .schemas import (
    DiffusionConfig,
    DumpCircuitConfig,
    ExperimentConfig,
    FidelityConfig,
    HusimiConfig,
    LocalizationConfig,
    QVolumeConfig,
    SawtoothEvolveConfig,
    SchrodingerConfig,
    Subcommand,
)

logger = logging.getLogger(__name__)


class ExperimentOutput(BaseModel):
    """What a handler produces before anything is written."""

    columns: dict[str, list] = Field(..., description="CSV columns in order")
    gate_counts: dict[str, Any] = Field(default_factory=dict)
    results: dict[str, Any] = Field(default_factory=dict, description="Scalars for the sidecar")
    files: dict[str, str] = Field(default_factory=dict, description="Suffix -> text content")


class ExperimentResult(BaseModel):
    subcommand: Subcommand
    csv_path: Path
    sidecar_path: Path
    extra_paths: list[Path] = Field(default_factory=list)
    rows: int
    wall_time: float
    results: dict[str, Any] = Field(default_factory=dict)


def snapshot_columns(
    grid: SpatialGrid, snapshots: list[tuple[int, float, np.ndarray]]
) -> dict[str, list]:
    """Stack snapshots as consecutive blocks of N rows; psi is scaled so |psi|^2 integrates to 1."""
    x = grid.points()
    columns: dict[str, list] = {
        "step": [], "t": [], "x": [], "Re(psi)": [], "Im(psi)": [], "|psi|^2": []
    }
    for step, t, amps in snapshots:
        psi = amps / np.sqrt(grid.delta)
        columns["step"] += [step] * x.size
        columns["t"] += [t] * x.size
        columns["x"] += x.tolist()
        columns["Re(psi)"] += psi.real.tolist()
        columns["Im(psi)"] += psi.imag.tolist()
        columns["|psi|^2"] += (np.abs(psi) ** 2).tolist()
    return columns


def circuit_summary(circuit: Circuit) -> dict[str, Any]:
    return {
        "label": circuit.label,
        "n_qubits": circuit.n_qubits,
        "gate_count": circuit.gate_count,
        "counts": circuit.counts,
        "elementary_count": circuit.elementary_count,
    }


class ExperimentService:
    """Runs one experiment per call and writes its artifacts."""

    def __init__(self):
        self._handlers: dict[Subcommand, Callable[[BaseModel, ExperimentConfig], ExperimentOutput]] = {
            Subcommand.SAWTOOTH_EVOLVE: self.sawtooth_evolve,
            Subcommand.HUSIMI: self.husimi,
            Subcommand.LOCALIZATION: self.localization,
            Subcommand.DIFFUSION: self.diffusion,
            Subcommand.FIDELITY: self.fidelity,
            Subcommand.SCHRODINGER: self.schrodinger,
            Subcommand.QVOLUME: self.qvolume,
            Subcommand.DUMP_CIRCUIT: self.dump_circuit,
        }

    def run(self, config: ExperimentConfig) -> ExperimentResult:
        params = config.parameters()
        logger.info(f"Starting {config.subcommand} with seed {config.seed}: {config.params}")
        start = time.perf_counter()
        output = self._handlers[config.subcommand](params, config)
        wall_time = time.perf_counter() - start

        out_dir = Path(config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = config.subcommand.value
        csv_path = out_dir / f"{stem}.csv"
        rows = write_csv(csv_path, output.columns, config.digits)
        extra_paths = []
        for suffix, text in output.files.items():
            path = out_dir / f"{stem}.{suffix}"
            path.write_text(text, encoding="utf-8")
            extra_paths.append(path)
        sidecar_path = out_dir / f"{stem}.json"
        write_sidecar(
            sidecar_path,
            {
                "config": config.model_dump(mode="json"),
                "seed": config.seed,
                "gate_counts": output.gate_counts,
                "wall_time": wall_time,
                "columns": list(output.columns),
                "results": output.results,
            },
        )
        logger.info(f"Finished {config.subcommand} in {wall_time:.2f}s: {rows} rows")
        return ExperimentResult(
            subcommand=config.subcommand,
            csv_path=csv_path,
            sidecar_path=sidecar_path,
            extra_paths=extra_paths,
            rows=rows,
            wall_time=wall_time,
            results=output.results,
        )

    def distribution(
        self,
        params: SawtoothParams,
        t: int,
        representation: Representation = Representation.THETA,
        engine: str = "circuit",
    ) -> ActionDistribution:
        """W_m after t map steps from |m0>."""
        state = initial_state(params, representation)
        evolve = evolve_quantum if engine == "circuit" else evolve_reference
        evolve(state, params, t, representation)
        return action_distribution(state, params.m0, representation)

    def quantum_volume(self, spec: QVolumeInput) -> QVolumeReport:
        return quantum_volume(spec)

    def sawtooth_evolve(
        self, p: SawtoothEvolveConfig, config: ExperimentConfig
    ) -> ExperimentOutput:
        params = p.params()
        step = map_step_circuit(params, p.representation)
        dist = self.distribution(params, p.t, p.representation, p.engine)
        gate_counts = {"per_step": step.counts, "total": step.gate_count * p.t}
        if p.engine == "reference":
            gate_counts = {"per_step": step.counts, "total": 0}
        files = {"circuit.txt": dumps(step)} if p.dump_circuit else {}
        return ExperimentOutput(
            columns={"m": dist.m.tolist(), "W_m": dist.W.tolist()},
            gate_counts=gate_counts,
            results={"peak": dist.peak, "T": params.T, "chaotic": params.is_chaotic},
            files=files,
        )

    def husimi(self, p: HusimiConfig, config: ExperimentConfig) -> ExperimentOutput:
        params = p.params()
        grid = time_averaged_husimi(
            initial_state(params, p.representation),
            params,
            p.t_start,
            p.t_stop,
            HusimiSpec(n_theta=p.n_theta, n_action=p.n_action),
            p.representation,
        )
        # one row per angle, one column per action cell
        columns: dict[str, list] = {"theta": grid.theta.tolist()}
        for k, action in enumerate(grid.actions):
            columns[format_value(float(action))] = grid.values[:, k].tolist()
        return ExperimentOutput(
            columns=columns,
            results={
                **grid.metadata(),
                "theta": grid.theta.tolist(),
                "actions": grid.actions.tolist(),
                "T": params.T,
                "cell_area": grid.cell_area,
            },
        )

    def localization(
        self, p: LocalizationConfig, config: ExperimentConfig
    ) -> ExperimentOutput:
        params = p.params()
        table = localization_experiment(
            params,
            p.noise(),
            t=p.t,
            shots=p.shots,
            repetitions=p.repetitions,
            seed=config.seed,
            method=p.method,
            trajectories=p.trajectories,
            threads=config.threads,
        )
        circuit = map_circuit(params, p.t)
        return ExperimentOutput(
            columns={
                "m": table.m.tolist(),
                "W_noiseless": table.W_noiseless.tolist(),
                "W_noisy_exact": table.W_noisy_exact.tolist(),
                "W_sampled_mean": table.W_sampled_mean.tolist(),
                "W_sampled_std": table.W_sampled_std.tolist(),
            },
            gate_counts=circuit_summary(circuit),
            results={
                "method": table.method.value,
                "peak_noiseless": table.peak("W_noiseless"),
                "peak_noisy": table.peak(),
                "seeds": table.seeds,
                "T": params.T,
            },
        )

    def diffusion(self, p: DiffusionConfig, config: ExperimentConfig) -> ExperimentOutput:
        params = p.params()
        fit = diffusion_coefficient(params, p.ensemble, p.t_max, config.seed)
        columns: dict[str, list] = {"t": fit.times, "second_moment": fit.second_moments}
        results: dict[str, Any] = {
            "D": fit.D,
            "D_stderr": fit.D_stderr,
            "r_squared": fit.r_squared,
            "chaotic": fit.chaotic,
        }
        if p.quantum:
            moments = quantum_second_moments(params, p.t_max)
            columns["quantum_second_moment"] = moments.tolist()
            results["break_time"] = break_time(moments, fit.D)
        return ExperimentOutput(columns=columns, results=results)

    def fidelity(self, p: FidelityConfig, config: ExperimentConfig) -> ExperimentOutput:
        params = p.params()
        rows = fidelity_decay(
            initial_state(params, p.representation),
            params,
            p.eps_k,
            list(range(p.t_max + 1)),
            method=p.method,
            representation=p.representation,
        )
        echo = loschmidt_circuit(params, p.eps_k, p.t_max, p.representation)
        return ExperimentOutput(
            columns={"t": [t for t, _ in rows], "f": [f for _, f in rows]},
            gate_counts=circuit_summary(echo),
            results={"T": params.T, "eps_k": p.eps_k},
        )

    def schrodinger(
        self, p: SchrodingerConfig, config: ExperimentConfig
    ) -> ExperimentOutput:
        grid = SpatialGrid(n=p.n, d=p.d)
        potential = {
            "free": None,
            "harmonic": QuadraticPotential.harmonic(omega=p.omega),
            "linear": QuadraticPotential.linear(p.force),
        }[p.potential]
        evolution = EvolutionSettings(
            epsilon=p.epsilon,
            steps=p.steps,
            potential=potential,
            method=p.method,
            ancilla_bits=p.ancilla_bits,
            snapshot_every=p.snapshot_every,
        )
        psi0 = discretize(gaussian(p.x0, p.sigma, p.k0), grid)
        gates = trotter_evolve(psi0, evolution)
        reference = split_step_reference(psi0, evolution)
        snapshots = [(0, psi0.time, psi0.amplitudes)]
        every = p.snapshot_every or p.steps
        for i, (t, amps) in enumerate(gates.snapshots, start=1):
            snapshots.append((i * every, t, amps))
        if snapshots[-1][0] != p.steps:
            snapshots.append((p.steps, gates.time, gates.amplitudes))
        return ExperimentOutput(
            columns=snapshot_columns(grid, snapshots),
            gate_counts=gates.gate_counts,
            results={
                "snapshot_steps": [step for step, _, _ in snapshots],
                "time": gates.time,
                "mean_position": gates.mean_position(),
                "position_spread": gates.position_spread(),
                "band_mass": band_mass(gates),
                "max_amplitude_error": float(
                    np.max(np.abs(gates.amplitudes - reference.amplitudes))
                ),
            },
        )

    def qvolume(self, p: QVolumeConfig, config: ExperimentConfig) -> ExperimentOutput:
        results: dict[str, Any] = {}
        if p.eps_eff is not None:
            spec = QVolumeInput(n=p.n, eps_eff=p.eps_eff)
        else:
            noise = NoiseParams(p_dephase=p.p_dephase, p_relax=p.p_relax)
            estimates = [
                estimate_eps_eff(
                    kappa,
                    noise,
                    sequences=p.sequences,
                    depth_grid=p.depths,
                    seed=config.seed + kappa,
                    trajectories=p.trajectories,
                )
                for kappa in range(2, p.n + 1)
            ]
            # a single qubit has no two-qubit blocks; it inherits the kappa = 2 rate
            rates = [estimates[0].eps] + [e.eps for e in estimates]
            spec = QVolumeInput(n=p.n, eps_eff=rates)
            results["estimates"] = [
                e.model_dump(include={"kappa", "eps", "ci_low", "ci_high", "r_squared"})
                for e in estimates
            ]
        report = quantum_volume(spec)
        return ExperimentOutput(
            columns={
                "kappa": [row.kappa for row in report.table],
                "eps_eff": [row.eps_eff for row in report.table],
                "depth": [row.depth for row in report.table],
                "achievable": [row.achievable for row in report.table],
            },
            results={
                "log2_VQ": report.log2_VQ,
                "VQ": report.VQ,
                "best_kappa": report.best_kappa,
                **results,
            },
        )

    def dump_circuit(
        self, p: DumpCircuitConfig, config: ExperimentConfig
    ) -> ExperimentOutput:
        if p.circuit == "qft":
            circuit = qft_circuit(p.n)
        else:
            circuit = map_step_circuit(p.params(), p.representation)
        if p.lowered:
            circuit = lower_to_universal(circuit)
        counts = circuit.counts
        return ExperimentOutput(
            columns={"kind": list(counts), "count": list(counts.values())},
            gate_counts=circuit_summary(circuit),
            files={"circuit.txt": dumps(circuit)},
        )
