"""Command line surface: formats, determinism, exit codes."""

import json

import numpy as np
import pytest

from gztrop.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, _parse_t_grid, main
from gztrop.errors import DomainError
from gztrop.reports import (
    format_value,
    load_matrix,
    matrix_from_json_dict,
    save_matrix,
)


@pytest.fixture
def pauli_file(tmp_path):
    path = tmp_path / "pauli.json"
    path.write_text(
        json.dumps({"n": 2, "re": [[0.0, 1.0], [1.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]})
    )
    return str(path)


class TestParsers:
    def test_t_grid_range(self):
        assert _parse_t_grid("1:5:1") == (1.0, 2.0, 3.0, 4.0, 5.0)
        assert _parse_t_grid("2:10:4") == (2.0, 6.0, 10.0)
        assert _parse_t_grid("1.5,3") == (1.5, 3.0)
        with pytest.raises(DomainError):
            _parse_t_grid("5:1:1")

    def test_float_formatting(self):
        assert format_value(1.0 / 3.0) == "0.33333333333333331"
        assert format_value(True) == "true"
        assert format_value(None) == ""


class TestMatrixJson:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(1)
        z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = (z + z.conj().T) / 2
        path = tmp_path / "m.json"
        save_matrix(str(path), m)
        back = load_matrix(str(path))
        assert np.max(np.abs(back - m)) <= 1e-15

    def test_hermitian_validation(self):
        with pytest.raises(DomainError):
            matrix_from_json_dict(
                {"n": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]}
            )

    def test_shape_validation(self):
        with pytest.raises(DomainError):
            matrix_from_json_dict({"n": 2, "re": [[0]], "im": [[0]]})


class TestCommands:
    def test_pattern(self, pauli_file, capsys):
        code = main(["pattern", "--matrix", pauli_file, "--angles"])
        out = capsys.readouterr().out
        assert code == EXIT_PASS
        lines = out.strip().splitlines()
        assert lines[0] == "i,k,lambda,ell,psi"
        assert len(lines) == 4

    def test_gw_writes_b(self, pauli_file, tmp_path, capsys):
        b_out = tmp_path / "b.json"
        code = main(
            ["gw", "--matrix", pauli_file, "--t", "2.0", "--b-out", str(b_out)]
        )
        assert code == EXIT_PASS
        b = load_matrix(str(b_out), hermitian=False)
        want = np.exp(1.0) - np.exp(-1.0)
        assert abs(b[0, 1] - want) <= 1e-9

    def test_converge_action_csv_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "converge-action",
            "--n",
            "2",
            "--samples",
            "2",
            "--t-grid",
            "1:14:1",
            "--seed",
            "44",
        ]
        assert main(args + ["--out", str(out1)]) == EXIT_PASS
        assert main(args + ["--out", str(out2)]) == EXIT_PASS
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "converge-action",
                "--n",
                "2",
                "--samples",
                "1",
                "--t-grid",
                "1:14:1",
                "--out",
                str(out),
                "--format",
                "json",
            ]
        )
        assert code == EXIT_PASS
        payload = json.loads(out.read_text())
        assert payload["kind"] == "converge-action"
        assert payload["summary"]["passed"] is True
        assert all({"seed", "sample", "t"} <= set(r) for r in payload["rows"])

    def test_plot_renders_file(self, tmp_path):
        out = tmp_path / "act.csv"
        code = main(
            [
                "converge-action",
                "--n",
                "2",
                "--samples",
                "1",
                "--t-grid",
                "1:14:1",
                "--out",
                str(out),
                "--plot",
            ]
        )
        assert code == EXIT_PASS
        assert (tmp_path / "act.png").exists()

    def test_bad_config_exit(self):
        assert main(["converge-action", "--n", "9"]) == EXIT_CONFIG

    def test_missing_matrix_exit(self):
        assert main(["pattern", "--matrix", "/does/not/exist.json"]) == EXIT_CONFIG

    def test_verify_fast_and_corrupted_tolerance(self, tmp_path):
        out = tmp_path / "v.csv"
        code = main(
            [
                "verify",
                "--fast",
                "--tol",
                "minor_leibniz=1e-30",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_FAIL
        text = out.read_text()
        assert "minor_leibniz,false" in text

    def test_tropical_map_mode(self, tmp_path, capsys):
        code = main(["tropical-map", "--n", "2", "--samples", "2"])
        assert code == EXIT_PASS
        out = capsys.readouterr().out
        assert "rhombus_feasibility" in out
