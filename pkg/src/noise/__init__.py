from .channels import apply_channel, relax_kraus
from .schemas import (
    Channel,
    DensityMatrix,
    LocalizationTable,
    NoiseMethod,
    NoiseParams,
    TrajectoryBatch,
)
from .services import (
    apply_readout_error,
    auto_method,
    localization_experiment,
    map_circuit,
    noisy_run,
    run_density,
    run_trajectories,
)

__all__ = [
    "Channel",
    "DensityMatrix",
    "LocalizationTable",
    "NoiseMethod",
    "NoiseParams",
    "TrajectoryBatch",
    "apply_channel",
    "apply_readout_error",
    "auto_method",
    "localization_experiment",
    "map_circuit",
    "noisy_run",
    "relax_kraus",
    "run_density",
    "run_trajectories",
]
