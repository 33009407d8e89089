"""Configuration module for the quantum dynamics simulator."""

from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Application configuration loaded from environment variables."""

    OUTPUT_DIR: Path = Field(
        default=BASE_DIR / "output",
        description="Default directory for experiment CSV files and JSON sidecars",
    )
    LOG_DIR: Path = Field(
        default=BASE_DIR / "logs", description="Directory for timestamped log files"
    )
    LOG_LEVEL: str = Field(default="INFO", description="Root logging level")

    # Capacity limits
    MAX_STATEVEC_QUBITS: int = Field(
        default=24, ge=20, description="Largest register a StateVector may hold"
    )
    MAX_DENSITY_QUBITS: int = Field(
        default=10, ge=1, description="Largest register for density-matrix runs"
    )

    # Numerics
    NORM_TOLERANCE: float = Field(
        default=1e-10, description="Norm drift above this value is logged"
    )
    LOCALIZATION_FLOOR: float = Field(
        default=1e-8, description="Smallest W_m used by the localization fit"
    )
    DEFAULT_SEED: int = Field(default=0, description="Seed used when none is given")

    # Parallelism
    THREADS: int = Field(default=4, ge=1, description="Worker cap for batch runs")
    TRAJECTORY_BLOCK_SIZE: int = Field(
        default=8192, ge=1, description="Trajectories propagated per vectorised block"
    )

    # Artifacts
    CSV_SIGNIFICANT_DIGITS: int = Field(default=17, ge=1, le=17)
    SCHEMA_VERSION: int = Field(default=1, description="JSON sidecar schema version")

    model_config = SettingsConfigDict(
        env_prefix="QDYN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("OUTPUT_DIR", "LOG_DIR")
    def validate_directories(cls, v):
        """Ensure directory settings are Path objects."""
        if not isinstance(v, Path):
            v = Path(v)
        return v


settings = Settings()  # type: ignore
