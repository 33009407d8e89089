from .fidelity import (
    fidelity_decay,
    fidelity_direct,
    fidelity_ramsey,
    loschmidt_circuit,
    ramsey_state,
)
from .husimi import coherent_state, husimi, time_averaged_husimi
from .schemas import (
    ActionDistribution,
    DiagonalObservable,
    HusimiGrid,
    HusimiSpec,
    LocalizationFit,
    RamseyResult,
)
from .services import (
    action_distribution,
    apply_observable,
    correlation_function,
    fit_localization_length,
    mean_distribution,
    second_moment,
)

__all__ = [
    "ActionDistribution",
    "DiagonalObservable",
    "HusimiGrid",
    "HusimiSpec",
    "LocalizationFit",
    "RamseyResult",
    "action_distribution",
    "apply_observable",
    "coherent_state",
    "correlation_function",
    "fidelity_decay",
    "fidelity_direct",
    "fidelity_ramsey",
    "fit_localization_length",
    "husimi",
    "loschmidt_circuit",
    "mean_distribution",
    "ramsey_state",
    "second_moment",
    "time_averaged_husimi",
]
