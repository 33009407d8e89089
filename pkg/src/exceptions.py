"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class DomainError(SimulationError, ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(SimulationError):
    """A register, ancilla range or method limit would be exceeded."""


class FitError(SimulationError):
    """A fit is degenerate or the data does not follow the fitted model."""


class NumericalError(SimulationError):
    """Norm drift, non-finite values or another numerical breakdown."""


class NotLocalizedError(FitError):
    """ln W_m does not decrease with |m - m0|."""


class ConfigError(DomainError):
    """An experiment configuration failed validation; ``errors`` lists every problem."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))
