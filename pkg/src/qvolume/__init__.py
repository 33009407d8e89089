from .schemas import EpsEffEstimate, QVolumeInput, QVolumeReport, QVolumeRow
from .services import (
    estimate_eps_eff,
    haar_unitary,
    log2_from_volume,
    quantum_volume,
    random_two_qubit_block,
    random_volume_circuit,
    volume_from_log2,
)

__all__ = [
    "EpsEffEstimate",
    "QVolumeInput",
    "QVolumeReport",
    "QVolumeRow",
    "estimate_eps_eff",
    "haar_unitary",
    "log2_from_volume",
    "quantum_volume",
    "random_two_qubit_block",
    "random_volume_circuit",
    "volume_from_log2",
]
