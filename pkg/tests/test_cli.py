"""Tests for the experiment runner, its configuration and the artifact files."""

import csv
import logging

import pytest
from typer.testing import CliRunner

from src.artifacts import format_value, read_sidecar, write_csv
from src.circuits import loads
from src.cli import ExperimentConfig, app, validate_config
from src.config import settings
from src.exceptions import ConfigError, DomainError

runner = CliRunner()

SMALL_CHAOTIC_ARGS = ["--n", "3", "--kT", "1.5", "--k", "0.273", "--m0", "0"]


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()


def read_rows(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


class TestValidateConfig:
    def test_defaults_filled(self, output_dir):
        validated = validate_config("sawtooth-evolve", {})
        config = validated.config
        assert config.seed == settings.DEFAULT_SEED == 0
        assert config.output_dir == output_dir
        assert config.params["t"] == 1
        assert config.params["kT"] == 1.5

    def test_non_chaotic_warning(self, output_dir):
        validated = validate_config("husimi", {"n": 4, "kT": -0.1, "k": -0.1})
        assert any("integrable/quasi-integrable regime" in w for w in validated.warnings)

    def test_chaotic_has_no_warning(self, output_dir):
        assert validate_config("sawtooth-evolve", {"kT": 1.5}).warnings == []

    def test_negative_shots(self, output_dir):
        with pytest.raises(ConfigError) as info:
            validate_config("localization", {"shots": -5})
        assert any("shots" in message for message in info.value.errors)

    def test_errors_aggregated(self, output_dir):
        with pytest.raises(ConfigError) as info:
            validate_config(
                "localization", {"shots": -5, "repetitions": 0, "p_dephase": 2.0}, threads=-1
            )
        assert len(info.value.errors) == 4

    def test_config_error_is_domain_error(self, output_dir):
        with pytest.raises(DomainError):
            validate_config("sawtooth-evolve", {"k": 0.0})

    def test_unknown_subcommand(self, output_dir):
        with pytest.raises(ConfigError):
            validate_config("teleport", {})

    def test_json_round_trip(self, output_dir):
        config = validate_config("fidelity", {"eps_k": 0.1 + 0.2, "kT": 1 / 3}, seed=7).config
        again = ExperimentConfig.model_validate_json(config.model_dump_json())
        assert again == config
        assert again.parameters().eps_k == 0.1 + 0.2

    def test_qvolume_needs_a_rate_source(self, output_dir):
        with pytest.raises(ConfigError):
            validate_config("qvolume", {"n": 4})


class TestArtifacts:
    def test_seventeen_digits(self):
        assert float(format_value(0.1 + 0.2)) == 0.1 + 0.2
        assert format_value(3) == "3"
        assert format_value(True) == "1"

    def test_ragged_columns(self, tmp_path):
        with pytest.raises(DomainError):
            write_csv(tmp_path / "x.csv", {"a": [1, 2], "b": [1.0]})


class TestSubcommands:
    def test_small_register_peaks_at_zero(self, output_dir):
        result = invoke("sawtooth-evolve", *SMALL_CHAOTIC_ARGS, "--t", 1)
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "sawtooth-evolve.csv")
        assert [int(r["m"]) for r in rows] == list(range(-4, 4))
        peak = max(rows, key=lambda r: float(r["W_m"]))
        assert int(peak["m"]) == 0
        assert sum(float(r["W_m"]) for r in rows) == pytest.approx(1.0, abs=1e-12)

    def test_sidecar(self, output_dir):
        invoke("sawtooth-evolve", *SMALL_CHAOTIC_ARGS, "--t", 2)
        sidecar = read_sidecar(output_dir / "sawtooth-evolve.json")
        assert sidecar["schema_version"] == settings.SCHEMA_VERSION
        assert sidecar["seed"] == 0
        assert sidecar["gate_counts"]["total"] == 60
        assert sidecar["wall_time"] >= 0
        config = ExperimentConfig.model_validate(sidecar["config"])
        assert config.parameters().t == 2

    def test_csv_reproduced_from_sidecar(self, output_dir, tmp_path):
        invoke("sawtooth-evolve", *SMALL_CHAOTIC_ARGS, "--t", 3)
        first = (output_dir / "sawtooth-evolve.csv").read_bytes()
        config = read_sidecar(output_dir / "sawtooth-evolve.json")["config"]
        params = {k: v for k, v in config["params"].items() if k != "dump_circuit"}
        args = [
            "--n", params["n"], "--kT", repr(params["kT"]), "--k", repr(params["k"]),
            "--m0", params["m0"], "--t", params["t"], "--seed", config["seed"],
        ]
        invoke("sawtooth-evolve", *args, "--output-dir", tmp_path / "again")
        assert (tmp_path / "again" / "sawtooth-evolve.csv").read_bytes() == first

    def test_dump_circuit_flag(self, output_dir):
        result = invoke("sawtooth-evolve", *SMALL_CHAOTIC_ARGS, "--dump-circuit")
        assert result.exit_code == 0, result.output
        circuit = loads((output_dir / "sawtooth-evolve.circuit.txt").read_text())
        assert circuit.gate_count == 30

    def test_dump_map_step(self, output_dir):
        result = invoke("dump-circuit", "--n", 4, "--map-step")
        assert result.exit_code == 0, result.output
        text = (output_dir / "dump-circuit.circuit.txt").read_text()
        assert len([line for line in text.splitlines() if not line.startswith("#")]) == 52
        assert loads(text).gate_count == 52
        counts = {r["kind"]: int(r["count"]) for r in read_rows(output_dir / "dump-circuit.csv")}
        assert sum(counts.values()) == 52

    def test_dump_qft(self, output_dir):
        result = invoke("dump-circuit", "--n", 6, "--qft")
        assert result.exit_code == 0, result.output
        assert loads((output_dir / "dump-circuit.circuit.txt").read_text()).gate_count == 21

    def test_dump_needs_one_circuit(self, output_dir):
        assert invoke("dump-circuit", "--map-step", "--qft").exit_code == 2

    def test_localization_byte_identical(self, output_dir, tmp_path):
        args = [
            "localization", *SMALL_CHAOTIC_ARGS, "--p-dephase", 0.02, "--p-relax", 0.01,
            "--p-readout", 0.02, "--shots", 1000, "--repetitions", 3, "--seed", 11,
        ]
        first = invoke(*args, "--output-dir", tmp_path / "a")
        second = invoke(*args, "--output-dir", tmp_path / "b")
        assert first.exit_code == second.exit_code == 0
        a = (tmp_path / "a" / "localization.csv").read_bytes()
        b = (tmp_path / "b" / "localization.csv").read_bytes()
        assert a == b

    def test_localization_noise_lowers_peak(self, output_dir):
        invoke(
            "localization", *SMALL_CHAOTIC_ARGS, "--p-dephase", 0.02, "--p-relax", 0.01,
            "--p-readout", 0.02, "--shots", 500, "--repetitions", 2,
        )
        results = read_sidecar(output_dir / "localization.json")["results"]
        assert results["peak_noisy"] < results["peak_noiseless"]
        assert results["method"] == "density"

    def test_diffusion(self, output_dir):
        result = invoke("diffusion", "--n", 6, "--ensemble", 2000, "--t-max", 10, "--quantum")
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "diffusion.csv")
        assert len(rows) == 11
        assert set(rows[0]) == {"t", "second_moment", "quantum_second_moment"}
        assert float(rows[0]["second_moment"]) == 0.0

    def test_fidelity_starts_at_one(self, output_dir):
        result = invoke("fidelity", "--n", 4, "--t-max", 5, "--method", "ramsey")
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "fidelity.csv")
        assert float(rows[0]["f"]) == pytest.approx(1.0, abs=1e-12)
        assert all(0.0 <= float(r["f"]) <= 1.0 + 1e-12 for r in rows)

    def test_schrodinger_matches_reference(self, output_dir):
        result = invoke(
            "schrodinger", "--n", 6, "--steps", 10, "--potential", "harmonic",
            "--epsilon", 0.05, "--d", 8.0,
        )
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "schrodinger.csv")
        assert list(rows[0]) == ["step", "t", "x", "Re(psi)", "Im(psi)", "|psi|^2"]
        assert len(rows) == 2 * 64
        assert {int(r["step"]) for r in rows[:64]} == {0}
        assert {int(r["step"]) for r in rows[64:]} == {10}
        for row in rows:
            re, im = float(row["Re(psi)"]), float(row["Im(psi)"])
            assert re**2 + im**2 == pytest.approx(float(row["|psi|^2"]), rel=1e-9, abs=1e-15)
        results = read_sidecar(output_dir / "schrodinger.json")["results"]
        assert results["snapshot_steps"] == [0, 10]
        assert results["max_amplitude_error"] < 1e-9

    def test_schrodinger_snapshot_blocks(self, output_dir):
        result = invoke(
            "schrodinger", "--n", 6, "--steps", 10, "--snapshot-every", 5, "--d", 8.0,
        )
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "schrodinger.csv")
        assert len(rows) == 3 * 64
        assert [int(rows[i * 64]["step"]) for i in range(3)] == [0, 5, 10]
        dx = float(rows[1]["x"]) - float(rows[0]["x"])
        for i in range(3):
            block = rows[i * 64 : (i + 1) * 64]
            assert sum(float(r["|psi|^2"]) for r in block) * dx == pytest.approx(1.0)
        sidecar = read_sidecar(output_dir / "schrodinger.json")
        assert sidecar["results"]["snapshot_steps"] == [0, 5, 10]

    def test_husimi_normalized(self, output_dir):
        result = invoke(
            "husimi", "--n", 4, "--kT", 1.5, "--k", 1.0, "--t-stop", 2,
            "--n-theta", 8, "--n-action", 8,
        )
        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "husimi.csv")
        assert len(rows) == 8
        assert len(rows[0]) == 9
        assert list(rows[0])[0] == "theta"
        results = read_sidecar(output_dir / "husimi.json")["results"]
        assert len(results["actions"]) == 8
        assert [float(r["theta"]) for r in rows] == pytest.approx(results["theta"])
        total = sum(float(v) for r in rows for key, v in r.items() if key != "theta")
        assert total * results["cell_area"] == pytest.approx(1.0)

    def test_qvolume(self, output_dir):
        result = invoke("qvolume", "--n", 8, "--eps-eff", 1 / 64)
        assert result.exit_code == 0, result.output
        results = read_sidecar(output_dir / "qvolume.json")["results"]
        assert results["log2_VQ"] == 8
        assert results["VQ"] == 256


class TestExitCodes:
    def test_non_chaotic_is_only_a_warning(self, output_dir):
        result = invoke("sawtooth-evolve", "--n", 3, "--kT=-0.1", "--k", 0.5)
        assert result.exit_code == 0
        assert "integrable/quasi-integrable regime" in result.output

    def test_negative_shots(self, output_dir):
        result = invoke("localization", "--shots=-1")
        assert result.exit_code == 2
        assert "shots" in result.output

    def test_unknown_subcommand(self, output_dir):
        assert invoke("teleport").exit_code == 2

    def test_unwritable_output_dir(self, output_dir, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory")
        result = invoke("dump-circuit", "--n", 2, "--output-dir", blocker / "sub")
        assert result.exit_code == 2

    def test_capacity_is_numerical_failure(self, output_dir, monkeypatch):
        monkeypatch.setattr(settings, "MAX_STATEVEC_QUBITS", 2)
        result = invoke("sawtooth-evolve", *SMALL_CHAOTIC_ARGS)
        assert result.exit_code == 3
