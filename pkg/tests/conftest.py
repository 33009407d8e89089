"""Shared fixtures for the simulator tests."""

import numpy as np
import pytest

from src.rng import make_rng
from src.statevec import StateVector


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Factory for normalized random states."""

    def make(n_qubits: int) -> StateVector:
        dim = 1 << n_qubits
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps /= np.linalg.norm(amps)
        return StateVector(n_qubits=n_qubits, amplitudes=amps)

    return make


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Point artifact output and logs at a temporary directory."""
    from src.config import settings

    out = tmp_path / "output"
    monkeypatch.setattr(settings, "OUTPUT_DIR", out)
    monkeypatch.setattr(settings, "LOG_DIR", tmp_path / "logs")
    return out
