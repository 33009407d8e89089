"""
Trotter evolution psi(t + eps) = F^-1 exp(-i hbar k^2 eps / 2m) F exp(-i V eps / hbar) psi(t).
"""

import logging
import math
from collections import Counter
from collections.abc import Callable

import numpy as np

from src.circuits import (
    AncillaLayout,
    Circuit,
    ancilla_phase_table,
    apply_circuit,
    build_diagonal_phase_via_ancilla,
    invert_circuit,
    qft_gates,
    quadratic_phase_circuit,
)
from src.exceptions import CapacityError, DomainError
from src.statevec import StateVector, check_norm

from .schemas import (
    DiscretizedWavefunction,
    EvolutionSettings,
    PotentialMethod,
    QuadraticPotential,
    SpatialGrid,
)

logger = logging.getLogger(__name__)


def discretize(psi: Callable[[np.ndarray], np.ndarray], grid: SpatialGrid) -> DiscretizedWavefunction:
    """Sample psi on the grid and normalize the samples."""
    samples = np.asarray(psi(grid.points()), dtype=np.complex128)
    samples = np.broadcast_to(samples, (grid.size,)).copy()
    if not np.all(np.isfinite(samples)):
        raise DomainError("wave function is not finite on the grid")
    norm = math.sqrt(float(np.sum(np.abs(samples) ** 2)))
    if norm == 0.0:
        raise DomainError("wave function vanishes on every grid point")
    state = StateVector(n_qubits=grid.n, amplitudes=samples / norm)
    return DiscretizedWavefunction(grid=grid, state=state, norm_factor=norm)


def _signed_weights(n: int, scale: float) -> list[float]:
    weights = [scale * (1 << q) for q in range(n)]
    weights[-1] = -weights[-1]
    return weights


def kinetic_circuit(grid: SpatialGrid, settings: EvolutionSettings) -> Circuit:
    """QFT ladder, n^2 diagonal gates for exp(-i hbar k^2 eps / 2m), inverse ladder.

    k = pi m / d is quadratic in the signed bits of m, so the diagonal is a
    quadratic phase product acting on the bit-reversed wires the ladder leaves.
    """
    n = grid.n
    forward = Circuit(n_qubits=n, ops=tuple(qft_gates(n)))
    scale = math.pi / grid.d
    diagonal = quadratic_phase_circuit(
        n,
        _signed_weights(n, scale),
        [0.0] * n,
        coefficient=-settings.hbar * settings.epsilon / (2.0 * settings.mass),
        qubits=list(reversed(range(n))),
    )
    step = forward.then(diagonal).then(invert_circuit(forward))
    return step.model_copy(update={"label": "kinetic"})


def kinetic_phase_step(
    state: StateVector, grid: SpatialGrid, settings: EvolutionSettings
) -> StateVector:
    return apply_circuit(state, kinetic_circuit(grid, settings))


def structured_potential_circuit(
    grid: SpatialGrid, settings: EvolutionSettings, potential: QuadraticPotential
) -> Circuit:
    """n^2 diagonal gates for exp(-i eps (a x^2 + b x + c) / hbar).

    x = sum_q delta 2^q b_q + (delta / 2 - d) is linear in the bits.
    """
    n = grid.n
    weights = [grid.delta * (1 << q) for q in range(n)]
    offsets = [(0.5 * grid.delta - grid.d) / n] * n
    rate = -settings.epsilon / settings.hbar
    circuit = quadratic_phase_circuit(
        n,
        weights,
        offsets,
        coefficient=rate * potential.a,
        linear=rate * potential.b,
        label="potential",
    )
    return circuit.model_copy(update={"global_phase": rate * potential.c})


def ancilla_layout(
    grid: SpatialGrid, settings: EvolutionSettings, values: np.ndarray
) -> tuple[AncillaLayout, float]:
    """Quantize V to m bits: V ~ v_min + s f(x) with f in [0, 2^m).

    Returns the layout (value scale c = -eps s / hbar) and the phase of the
    constant offset v_min.
    """
    m = settings.ancilla_bits
    v_min, v_max = float(values.min()), float(values.max())
    if settings.potential_scale is not None:
        scale = settings.potential_scale
    elif v_max > v_min:
        scale = (v_max - v_min) / ((1 << m) - 1)
    else:
        scale = 1.0
    levels = np.rint((values - v_min) / scale).astype(np.int64)
    overflow = np.flatnonzero(levels >= 1 << m)
    if overflow.size:
        i = int(overflow[0])
        raise CapacityError(
            f"V(x_{i} = {grid.points()[i]:.6g}) = {values[i]:.6g} needs "
            f"{int(levels[i]).bit_length()} ancilla bits, only {m} available"
        )
    rate = -settings.epsilon / settings.hbar
    layout = AncillaLayout(
        data_qubits=grid.n,
        ancilla_qubits=m,
        value_scale=rate * scale,
        function_table=tuple(int(v) for v in levels),
    )
    return layout, rate * v_min


class PotentialStepper:
    """Applies exp(-i V(x, t) eps / hbar) with the configured method.

    Circuits and ancilla phase tables are rebuilt only when V depends on time.
    """

    def __init__(self, grid: SpatialGrid, settings: EvolutionSettings):
        self.grid = grid
        self.settings = settings
        self.gate_counts: Counter = Counter()
        self._cached: np.ndarray | Circuit | None = None
        self._pass_cost: dict[str, int] = {}
        if settings.method is PotentialMethod.STRUCTURED and not isinstance(
            settings.potential, QuadraticPotential | None
        ):
            raise DomainError("the structured method needs a QuadraticPotential")

    def _build(self, t: float) -> np.ndarray | Circuit:
        settings, grid = self.settings, self.grid
        self._pass_cost = {}
        if settings.potential is None:
            return np.zeros(grid.size)
        match settings.method:
            case PotentialMethod.STRUCTURED:
                circuit = structured_potential_circuit(grid, settings, settings.potential)
                self._pass_cost = circuit.counts
                return circuit
            case PotentialMethod.EXACT:
                values = settings.potential_values(grid.points(), t)
                return -settings.epsilon / settings.hbar * values
            case PotentialMethod.ANCILLA:
                values = settings.potential_values(grid.points(), t)
                layout, offset = ancilla_layout(grid, settings, values)
                circuit = build_diagonal_phase_via_ancilla(layout)
                # ancilla circuit cost in elementary gates, table ops charged n each
                self._pass_cost = {"ancilla": circuit.elementary_count}
                return ancilla_phase_table(circuit, grid.n) + offset

    def __call__(self, state: StateVector, t: float) -> StateVector:
        if self._cached is None or self.settings.time_dependent:
            self._cached = self._build(t)
        if isinstance(self._cached, Circuit):
            apply_circuit(state, self._cached)
        else:
            state.amplitudes *= np.exp(1j * self._cached)
        self.gate_counts.update(self._pass_cost)
        return state


def potential_phase_step(
    state: StateVector, grid: SpatialGrid, settings: EvolutionSettings, t: float = 0.0
) -> StateVector:
    """Multiply psi(x_i) by exp(-i V(x_i, t) eps / hbar)."""
    return PotentialStepper(grid, settings)(state, t)


def trotter_evolve(
    psi0: DiscretizedWavefunction, settings: EvolutionSettings
) -> DiscretizedWavefunction:
    """``settings.steps`` first-order Trotter steps, potential first then kinetic."""
    grid = psi0.grid
    state = psi0.state.copy()
    kinetic = kinetic_circuit(grid, settings)
    potential = PotentialStepper(grid, settings)
    counts: Counter = Counter()
    snapshots = []
    t = psi0.time
    for step in range(1, settings.steps + 1):
        potential(state, t)
        apply_circuit(state, kinetic)
        counts.update(kinetic.counts)
        t = psi0.time + step * settings.epsilon
        if settings.snapshot_every and step % settings.snapshot_every == 0:
            snapshots.append((t, state.amplitudes.copy()))
    counts.update(potential.gate_counts)
    check_norm(state, f"after {settings.steps} Trotter steps")
    logger.info(
        f"Trotter evolution n={grid.n}, steps={settings.steps}, "
        f"method={settings.method}: {dict(counts)}"
    )
    return DiscretizedWavefunction(
        grid=grid,
        state=state,
        norm_factor=psi0.norm_factor,
        time=t,
        gate_counts=dict(counts),
        snapshots=snapshots,
    )


def split_step_reference(
    psi0: DiscretizedWavefunction, settings: EvolutionSettings
) -> DiscretizedWavefunction:
    """Same product formula with exact diagonals and numpy FFTs."""
    grid = psi0.grid
    x, k = grid.points(), grid.momenta()
    kinetic = np.exp(-0.5j * settings.hbar * settings.epsilon * k**2 / settings.mass)
    psi = psi0.state.amplitudes.copy()
    t = psi0.time
    potential = None
    for step in range(settings.steps):
        if potential is None or settings.time_dependent:
            values = settings.potential_values(x, t)
            potential = np.exp(-1j * settings.epsilon * values / settings.hbar)
        psi = np.fft.ifft(kinetic * np.fft.fft(potential * psi))
        t = psi0.time + (step + 1) * settings.epsilon
    return DiscretizedWavefunction(
        grid=grid,
        state=StateVector(n_qubits=grid.n, amplitudes=psi),
        norm_factor=psi0.norm_factor,
        time=t,
    )


def momentum_spectrum(wavefunction: DiscretizedWavefunction) -> tuple[np.ndarray, np.ndarray]:
    """Wave numbers in increasing order and the probability of each."""
    probs = np.abs(np.fft.fft(wavefunction.amplitudes, norm="ortho")) ** 2
    k = wavefunction.grid.momenta()
    order = np.argsort(k, kind="stable")
    return k[order], probs[order]


def band_mass(wavefunction: DiscretizedWavefunction, guard: float = 1.0 / 8.0) -> float:
    """Probability inside |m| < (N/2)(1 - guard), the band free of aliasing."""
    grid = wavefunction.grid
    m = np.fft.fftfreq(grid.size) * grid.size
    probs = np.abs(np.fft.fft(wavefunction.amplitudes, norm="ortho")) ** 2
    return float(np.sum(probs[np.abs(m) < 0.5 * grid.size * (1.0 - guard)]))


def gaussian(x0: float = 0.0, sigma: float = 1.0, k0: float = 0.0):
    """Callable for exp(-(x - x0)^2 / (2 sigma^2) + i k0 x)."""

    def psi(x: np.ndarray) -> np.ndarray:
        return np.exp(-((x - x0) ** 2) / (2.0 * sigma**2) + 1j * k0 * x)

    return psi


def free_gaussian_width(sigma: float, t: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Position spread of a free Gaussian packet exp(-x^2 / 2 sigma^2) at time t."""
    return sigma / math.sqrt(2.0) * math.sqrt(1.0 + (hbar * t / (mass * sigma**2)) ** 2)
