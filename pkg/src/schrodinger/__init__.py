from .schemas import (
    DiscretizedWavefunction,
    EvolutionSettings,
    PotentialMethod,
    QuadraticPotential,
    SpatialGrid,
)
from .services import (
    band_mass,
    discretize,
    kinetic_phase_step,
    momentum_spectrum,
    potential_phase_step,
    split_step_reference,
    trotter_evolve,
)

__all__ = [
    "DiscretizedWavefunction",
    "EvolutionSettings",
    "PotentialMethod",
    "QuadraticPotential",
    "SpatialGrid",
    "band_mass",
    "discretize",
    "kinetic_phase_step",
    "momentum_spectrum",
    "potential_phase_step",
    "split_step_reference",
    "trotter_evolve",
]
