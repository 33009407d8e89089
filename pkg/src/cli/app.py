"""
Typer application with one subcommand per experiment.

Exit status: 0 on success, 2 for configuration errors (bad values, unknown
subcommand, unwritable output directory), 3 for numerical failures.
"""

import logging
import math
from pathlib import Path
from typing import Annotated, Any

import typer

from src.exceptions import CapacityError, ConfigError, DomainError, FitError, NumericalError
from src.logging_config import setup_logging
from src.noise import NoiseMethod
from src.sawtooth import Representation
from src.schrodinger import PotentialMethod

from .schemas import Subcommand, validate_config
from .services import ExperimentResult, ExperimentService

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

app = typer.Typer(
    name="qdyn",
    help="Gate-level simulations of the quantum sawtooth map and related experiments.",
    no_args_is_help=True,
    add_completion=False,
)

Seed = Annotated[int | None, typer.Option(help="Master seed (default QDYN_DEFAULT_SEED)")]
OutputDir = Annotated[
    Path | None, typer.Option("--output-dir", help="Directory for CSV and JSON files")
]
Threads = Annotated[int | None, typer.Option(help="Worker cap for batch runs")]
Qubits = Annotated[int, typer.Option("--n", help="Number of qubits")]
Classicality = Annotated[float, typer.Option("--kT", help="Classicality K = kT")]
Kick = Annotated[float, typer.Option("--k", help="Kick strength k")]
Start = Annotated[int, typer.Option("--m0", help="Initial action m0")]
Basis = Annotated[
    Representation, typer.Option("--representation", help="Register basis")
]


def _fail(messages: list[str], code: int) -> typer.Exit:
    for message in messages:
        typer.echo(f"error: {message}", err=True)
    return typer.Exit(code=code)


def _execute(
    subcommand: Subcommand,
    params: dict[str, Any],
    seed: int | None,
    output_dir: Path | None,
    threads: int | None,
) -> ExperimentResult:
    setup_logging(name=subcommand.value)
    try:
        validated = validate_config(subcommand, params, seed, output_dir, threads)
    except ConfigError as exc:
        raise _fail(exc.errors, EXIT_CONFIG) from None
    for warning in validated.warnings:
        logger.warning(warning)
        typer.echo(f"warning: {warning}", err=True)
    typer.echo(validated.config.model_dump_json(indent=2))

    try:
        result = ExperimentService().run(validated.config)
    except (FitError, NumericalError, CapacityError) as exc:
        logger.error(f"{subcommand} failed: {exc}")
        raise _fail([str(exc)], EXIT_NUMERICAL) from None
    except DomainError as exc:
        raise _fail([str(exc)], EXIT_CONFIG) from None
    except OSError as exc:
        raise _fail([f"cannot write to {validated.config.output_dir}: {exc}"], EXIT_CONFIG) from None

    typer.echo(f"wrote {result.csv_path} and {result.sidecar_path}")
    return result


@app.command("sawtooth-evolve")
def sawtooth_evolve(
    n: Qubits = 3,
    kT: Classicality = 1.5,
    k: Kick = 0.273,
    m0: Start = 0,
    t: Annotated[int, typer.Option("--t", help="Map steps")] = 1,
    representation: Basis = Representation.THETA,
    engine: Annotated[str, typer.Option(help="circuit or reference")] = "circuit",
    dump_circuit: Annotated[
        bool, typer.Option("--dump-circuit", help="Also write the step circuit")
    ] = False,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Action distribution W_m after t map steps from |m0>."""
    params = dict(
        n=n, kT=kT, k=k, m0=m0, t=t, representation=representation,
        engine=engine, dump_circuit=dump_circuit,
    )
    result = _execute(Subcommand.SAWTOOTH_EVOLVE, params, seed, output_dir, threads)
    typer.echo(f"peak at m = {result.results['peak']}")


@app.command()
def husimi(
    n: Qubits = 9,
    kT: Classicality = -0.1,
    k: Annotated[
        float | None, typer.Option("--k", help="Kick strength; default gives T = 2 pi / N")
    ] = None,
    m0: Start = 0,
    t_start: Annotated[int, typer.Option("--t-start")] = 0,
    t_stop: Annotated[int, typer.Option("--t-stop")] = 0,
    n_theta: Annotated[int, typer.Option("--n-theta")] = 64,
    n_action: Annotated[int, typer.Option("--n-action")] = 64,
    representation: Basis = Representation.THETA,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Husimi function averaged over t_start <= t <= t_stop."""
    if k is None:
        k = kT * (1 << n) / (2.0 * math.pi)
    params = dict(
        n=n, kT=kT, k=k, m0=m0, t_start=t_start, t_stop=t_stop,
        n_theta=n_theta, n_action=n_action, representation=representation,
    )
    _execute(Subcommand.HUSIMI, params, seed, output_dir, threads)


@app.command()
def localization(
    n: Qubits = 3,
    kT: Classicality = 1.5,
    k: Kick = 0.273,
    m0: Start = 0,
    t: Annotated[int, typer.Option("--t", help="Map steps")] = 1,
    shots: Annotated[int, typer.Option(help="Shots per repetition")] = 8192,
    repetitions: Annotated[int, typer.Option()] = 10,
    p_dephase: Annotated[float, typer.Option("--p-dephase")] = 0.0,
    p_relax: Annotated[float, typer.Option("--p-relax")] = 0.0,
    p_readout: Annotated[float, typer.Option("--p-readout")] = 0.0,
    inflation: Annotated[float, typer.Option(help="Noise multiplier")] = 1.0,
    method: Annotated[NoiseMethod | None, typer.Option(help="density or trajectories")] = None,
    trajectories: Annotated[int, typer.Option()] = 10000,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Noiseless, noisy-exact and noisy-sampled W_m after t steps from |m0>."""
    params = dict(
        n=n, kT=kT, k=k, m0=m0, t=t, shots=shots, repetitions=repetitions,
        p_dephase=p_dephase, p_relax=p_relax, p_readout=p_readout,
        inflation=inflation, method=method, trajectories=trajectories,
    )
    result = _execute(Subcommand.LOCALIZATION, params, seed, output_dir, threads)
    typer.echo(
        f"peak {result.results['peak_noiseless']:.6f} noiseless, "
        f"{result.results['peak_noisy']:.6f} noisy"
    )


@app.command()
def diffusion(
    n: Qubits = 10,
    kT: Classicality = 1.5,
    k: Kick = 3.0,
    m0: Start = 0,
    ensemble: Annotated[int, typer.Option(help="Classical trajectories")] = 100_000,
    t_max: Annotated[int, typer.Option("--t-max")] = 50,
    quantum: Annotated[bool, typer.Option("--quantum", help="Add the quantum moment")] = False,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Classical (and optionally quantum) second moment of the action."""
    params = dict(
        n=n, kT=kT, k=k, m0=m0, ensemble=ensemble, t_max=t_max, quantum=quantum
    )
    result = _execute(Subcommand.DIFFUSION, params, seed, output_dir, threads)
    typer.echo(f"D = {result.results['D']:.6g}")


@app.command()
def fidelity(
    n: Qubits = 6,
    kT: Classicality = 1.5,
    k: Kick = 2.0,
    m0: Start = 0,
    eps_k: Annotated[float, typer.Option("--eps-k", help="Perturbation of k")] = 1e-3,
    t_max: Annotated[int, typer.Option("--t-max")] = 50,
    method: Annotated[str, typer.Option(help="direct or ramsey")] = "direct",
    representation: Basis = Representation.THETA,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Fidelity decay f(t) under a perturbation of the kick strength."""
    params = dict(
        n=n, kT=kT, k=k, m0=m0, eps_k=eps_k, t_max=t_max, method=method,
        representation=representation,
    )
    _execute(Subcommand.FIDELITY, params, seed, output_dir, threads)


@app.command()
def schrodinger(
    n: Qubits = 8,
    d: Annotated[float, typer.Option("--d", help="Half-width of the domain")] = 10.0,
    epsilon: Annotated[float, typer.Option(help="Time step")] = 0.01,
    steps: Annotated[int, typer.Option()] = 100,
    potential: Annotated[str, typer.Option(help="free, harmonic or linear")] = "free",
    omega: Annotated[float, typer.Option()] = 1.0,
    force: Annotated[float, typer.Option()] = 0.0,
    x0: Annotated[float, typer.Option("--x0")] = 0.0,
    sigma: Annotated[float, typer.Option()] = 1.0,
    k0: Annotated[float, typer.Option("--k0")] = 0.0,
    method: Annotated[PotentialMethod, typer.Option()] = PotentialMethod.STRUCTURED,
    ancilla_bits: Annotated[int, typer.Option("--ancilla-bits")] = 16,
    snapshot_every: Annotated[
        int | None, typer.Option("--snapshot-every", help="Steps between written snapshots")
    ] = None,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Split-operator evolution of a Gaussian packet."""
    params = dict(
        n=n, d=d, epsilon=epsilon, steps=steps, potential=potential, omega=omega,
        force=force, x0=x0, sigma=sigma, k0=k0, method=method,
        ancilla_bits=ancilla_bits, snapshot_every=snapshot_every,
    )
    _execute(Subcommand.SCHRODINGER, params, seed, output_dir, threads)


@app.command()
def qvolume(
    n: Qubits = 8,
    eps_eff: Annotated[
        float | None, typer.Option("--eps-eff", help="Constant effective error rate")
    ] = None,
    p_dephase: Annotated[float, typer.Option("--p-dephase")] = 0.0,
    p_relax: Annotated[float, typer.Option("--p-relax")] = 0.0,
    sequences: Annotated[int, typer.Option()] = 4,
    depths: Annotated[list[int] | None, typer.Option("--depth")] = None,
    trajectories: Annotated[int, typer.Option()] = 2000,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Quantum volume from a given or estimated eps_eff."""
    params = dict(
        n=n, eps_eff=eps_eff, p_dephase=p_dephase, p_relax=p_relax,
        sequences=sequences, depths=depths, trajectories=trajectories,
    )
    result = _execute(Subcommand.QVOLUME, params, seed, output_dir, threads)
    typer.echo(f"log2 V_Q = {result.results['log2_VQ']}, V_Q = {result.results['VQ']}")


@app.command("dump-circuit")
def dump_circuit(
    n: Qubits = 4,
    kT: Classicality = 1.5,
    k: Kick = 0.273,
    map_step: Annotated[bool, typer.Option("--map-step", help="One map period")] = False,
    qft: Annotated[bool, typer.Option("--qft", help="The QFT")] = False,
    lowered: Annotated[bool, typer.Option("--lowered", help="Lower to H, P, CNOT")] = False,
    representation: Basis = Representation.THETA,
    seed: Seed = None,
    output_dir: OutputDir = None,
    threads: Threads = None,
):
    """Text dump of the map-step or QFT circuit."""
    if map_step and qft:
        raise _fail(["choose one of --map-step and --qft"], EXIT_CONFIG)
    params = dict(
        n=n, kT=kT, k=k, circuit="qft" if qft else "map-step", lowered=lowered,
        representation=representation,
    )
    result = _execute(Subcommand.DUMP_CIRCUIT, params, seed, output_dir, threads)
    typer.echo(result.extra_paths[0].read_text(encoding="utf-8"), nl=False)
