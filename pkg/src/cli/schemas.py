"""
Experiment configurations for the command-line runner.

Each subcommand has a parameter model; ``ExperimentConfig`` wraps it with the
run-wide settings (seed, output directory, worker cap) and is what the JSON
sidecar stores.
"""

import math
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.config import settings
from src.exceptions import ConfigError
from src.noise import NoiseMethod, NoiseParams
from src.sawtooth import Representation, SawtoothParams
from src.schrodinger import PotentialMethod


class Subcommand(StrEnum):
    SAWTOOTH_EVOLVE = "sawtooth-evolve"
    HUSIMI = "husimi"
    LOCALIZATION = "localization"
    DIFFUSION = "diffusion"
    FIDELITY = "fidelity"
    SCHRODINGER = "schrodinger"
    QVOLUME = "qvolume"
    DUMP_CIRCUIT = "dump-circuit"


class MapConfig(BaseModel):
    """Sawtooth map given by the classicality K = kT and the kick strength k."""

    n: int = Field(default=3, ge=1, le=24, description="Number of qubits")
    kT: float = Field(default=1.5, description="Classicality parameter K = kT")
    k: float = Field(default=0.273, description="Kick strength")
    m0: int = Field(default=0, description="Initial action eigenvalue")
    representation: Representation = Representation.THETA

    @model_validator(mode="after")
    def check_map(self) -> "MapConfig":
        if not (math.isfinite(self.k) and math.isfinite(self.kT)):
            raise ValueError("k and kT must be finite")
        if self.k == 0:
            raise ValueError("k must be non-zero")
        half = 1 << (self.n - 1)
        if not -half <= self.m0 < half:
            raise ValueError(f"m0 = {self.m0} outside [-{half}, {half})")
        return self

    def params(self) -> SawtoothParams:
        return SawtoothParams.from_classicality(n=self.n, K=self.kT, k=self.k, m0=self.m0)


class SawtoothEvolveConfig(MapConfig):
    t: int = Field(default=1, ge=0, description="Map steps")
    engine: Literal["circuit", "reference"] = "circuit"
    dump_circuit: bool = Field(default=False, description="Also write the step circuit")


class HusimiConfig(MapConfig):
    t_start: int = Field(default=0, ge=0)
    t_stop: int = Field(default=0, ge=0)
    n_theta: int = Field(default=64, ge=1)
    n_action: int = Field(default=64, ge=2)

    @model_validator(mode="after")
    def check_window(self) -> "HusimiConfig":
        if self.t_start > self.t_stop:
            raise ValueError(f"t_start = {self.t_start} exceeds t_stop = {self.t_stop}")
        return self


class LocalizationConfig(MapConfig):
    representation: Representation = Representation.ACTION
    t: int = Field(default=1, ge=0)
    shots: int = Field(default=8192, ge=1)
    repetitions: int = Field(default=10, ge=1)
    p_dephase: float = Field(default=0.0, ge=0.0, le=1.0)
    p_relax: float = Field(default=0.0, ge=0.0, le=1.0)
    p_readout: float = Field(default=0.0, ge=0.0, le=1.0)
    inflation: float = Field(default=1.0, ge=0.0)
    method: NoiseMethod | None = Field(default=None, description="None picks by register size")
    trajectories: int = Field(default=10000, ge=1)

    def noise(self) -> NoiseParams:
        return NoiseParams(
            p_dephase=self.p_dephase,
            p_relax=self.p_relax,
            p_readout=self.p_readout,
            inflation=self.inflation,
        )


class DiffusionConfig(MapConfig):
    ensemble: int = Field(default=100_000, ge=1, description="Classical trajectories")
    t_max: int = Field(default=50, ge=2)
    quantum: bool = Field(default=False, description="Add the quantum second moment")


class FidelityConfig(MapConfig):
    eps_k: float = Field(default=1e-3, description="Perturbation of k")
    t_max: int = Field(default=50, ge=0)
    method: Literal["direct", "ramsey"] = "direct"


class SchrodingerConfig(BaseModel):
    n: int = Field(default=8, ge=1, le=24)
    d: float = Field(default=10.0, gt=0, description="Half-width of the domain")
    epsilon: float = Field(default=0.01, gt=0, description="Time step")
    steps: int = Field(default=100, ge=0)
    potential: Literal["free", "harmonic", "linear"] = "free"
    omega: float = Field(default=1.0, gt=0)
    force: float = 0.0
    x0: float = 0.0
    sigma: float = Field(default=1.0, gt=0)
    k0: float = 0.0
    method: PotentialMethod = PotentialMethod.STRUCTURED
    ancilla_bits: int = Field(default=16, ge=1)
    snapshot_every: int | None = Field(
        default=None, ge=1, description="Write the wavefunction every this many steps"
    )


class QVolumeConfig(BaseModel):
    n: int = Field(default=8, ge=1)
    eps_eff: float | None = Field(
        default=None, gt=0, description="Constant eps_eff; None estimates it from noise"
    )
    p_dephase: float = Field(default=0.0, ge=0.0, le=1.0)
    p_relax: float = Field(default=0.0, ge=0.0, le=1.0)
    sequences: int = Field(default=4, ge=1)
    depths: list[int] = Field(default_factory=lambda: [1, 2, 4])
    trajectories: int = Field(default=2000, ge=1)

    @field_validator("depths")
    def check_depths(cls, v):
        if not v or any(d < 1 for d in v):
            raise ValueError("depths must be positive and non-empty")
        return v

    @model_validator(mode="after")
    def check_source(self) -> "QVolumeConfig":
        if self.eps_eff is None:
            if self.n < 2:
                raise ValueError("estimating eps_eff needs n >= 2")
            if self.p_dephase == 0.0 and self.p_relax == 0.0:
                raise ValueError("give eps_eff or a non-zero p_dephase / p_relax")
        return self


class DumpCircuitConfig(MapConfig):
    circuit: Literal["map-step", "qft"] = "map-step"
    lowered: bool = Field(default=False, description="Lower to {H, P, CNOT}")


PARAMETER_MODELS: dict[Subcommand, type[BaseModel]] = {
    Subcommand.SAWTOOTH_EVOLVE: SawtoothEvolveConfig,
    Subcommand.HUSIMI: HusimiConfig,
    Subcommand.LOCALIZATION: LocalizationConfig,
    Subcommand.DIFFUSION: DiffusionConfig,
    Subcommand.FIDELITY: FidelityConfig,
    Subcommand.SCHRODINGER: SchrodingerConfig,
    Subcommand.QVOLUME: QVolumeConfig,
    Subcommand.DUMP_CIRCUIT: DumpCircuitConfig,
}


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce one run; stored verbatim in the sidecar."""

    subcommand: Subcommand
    params: dict[str, Any] = Field(..., description="Normalized subcommand parameters")
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0)
    output_dir: Path
    threads: int = Field(default=settings.THREADS, ge=1)
    digits: int = Field(
        default=settings.CSV_SIGNIFICANT_DIGITS, ge=1, le=17, description="CSV float digits"
    )

    def parameters(self) -> BaseModel:
        return PARAMETER_MODELS[self.subcommand].model_validate(self.params)


class ValidatedConfig(BaseModel):
    config: ExperimentConfig
    warnings: list[str] = Field(default_factory=list)


def _messages(exc: ValidationError, prefix: str = "") -> list[str]:
    messages = []
    for error in exc.errors():
        where = ".".join(str(part) for part in error["loc"])
        label = f"{prefix}{where}" if where else prefix.rstrip(".") or "config"
        messages.append(f"{label}: {error['msg']}")
    return messages


def _warnings(params: BaseModel) -> list[str]:
    warnings = []
    if isinstance(params, MapConfig) and -4.0 <= params.kT <= 0.0:
        warnings.append(
            f"kT = {params.kT:g} lies in [-4, 0]: integrable/quasi-integrable regime"
        )
    if isinstance(params, LocalizationConfig):
        if params.method is NoiseMethod.DENSITY and params.n > settings.MAX_DENSITY_QUBITS:
            warnings.append(
                f"density method requested for n = {params.n} > "
                f"{settings.MAX_DENSITY_QUBITS}; the run will fail its capacity check"
            )
    if isinstance(params, HusimiConfig) and params.n_theta * params.n_action < (
        1 << params.n
    ):
        warnings.append(
            f"Husimi grid {params.n_theta}x{params.n_action} has fewer cells than N"
        )
    return warnings


def validate_config(
    subcommand: Subcommand | str,
    params: dict[str, Any],
    seed: int | None = None,
    output_dir: Path | None = None,
    threads: int | None = None,
) -> ValidatedConfig:
    """Normalize a raw configuration, collecting every error before raising.

    Missing values take their documented defaults: seed ``DEFAULT_SEED``,
    output directory ``OUTPUT_DIR``, worker cap ``THREADS``.
    """
    errors: list[str] = []
    try:
        subcommand = Subcommand(subcommand)
    except ValueError:
        raise ConfigError([f"unknown subcommand {subcommand!r}"]) from None

    clean = {k: v for k, v in params.items() if v is not None}
    parsed = None
    try:
        parsed = PARAMETER_MODELS[subcommand].model_validate(clean)
    except ValidationError as exc:
        errors += _messages(exc, "params.")

    run_wide = {
        "seed": settings.DEFAULT_SEED if seed is None else seed,
        "output_dir": output_dir or settings.OUTPUT_DIR,
        "threads": threads or settings.THREADS,
    }
    try:
        ExperimentConfig(subcommand=subcommand, params={}, **run_wide)
    except ValidationError as exc:
        errors += _messages(exc)

    if errors:
        raise ConfigError(errors)
    config = ExperimentConfig(
        subcommand=subcommand, params=parsed.model_dump(mode="json"), **run_wide
    )
    return ValidatedConfig(config=config, warnings=_warnings(parsed))
