from .classical import (
    classical_second_moments,
    classical_step,
    diffusion_coefficient,
    evolve_ensemble,
    sample_ensemble,
)
from .schemas import (
    ClassicalEnsemble,
    DiffusionFit,
    Representation,
    SawtoothParams,
    SignedActionMap,
)
from .services import (
    action_probabilities,
    break_time,
    evolve_quantum,
    evolve_reference,
    initial_state,
    map_step_circuit,
    quantum_second_moments,
    uk_circuit,
    ut_circuit,
)

__all__ = [
    "ClassicalEnsemble",
    "DiffusionFit",
    "Representation",
    "SawtoothParams",
    "SignedActionMap",
    "action_probabilities",
    "break_time",
    "classical_second_moments",
    "classical_step",
    "diffusion_coefficient",
    "evolve_ensemble",
    "evolve_quantum",
    "evolve_reference",
    "initial_state",
    "map_step_circuit",
    "quantum_second_moments",
    "sample_ensemble",
    "uk_circuit",
    "ut_circuit",
]
