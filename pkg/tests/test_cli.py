"""CLI behaviour: outputs, determinism, exit codes, config handling."""

from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from mpscap import model_to_dict, mg_model
from mpscap.cli import emit_plot, main


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


class TestCapacityCommand:
    def test_near_ground_angle_row(self, capsys):
        code, out, _ = run_cli(
            capsys, "capacity", "--model", "aklt", "--theta", "0.9553", "--n", "16"
        )
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 2  # both estimators by default
        assert float(rows[0]["closed_form"]) == pytest.approx(0.6667, abs=1e-3)
        assert {r["estimator"] for r in rows} == {"avg", "cond"}

    def test_ground_shortcut(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "capacity", "--model", "mg", "--g-ground", "--n", "6",
            "--estimator", "cond",
        )
        assert code == 0
        (row,) = parse_csv(out)
        assert float(row["closed_form"]) == pytest.approx(0.5, abs=1e-12)
        assert row["model"] == "mg"

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "capacity", "--model", "aklt", "--theta-ground", "--n", "4",
            "--format", "json",
        )
        assert code == 0
        records = json.loads(out)
        assert len(records) == 2
        assert records[0]["model"] == "aklt"

    def test_custom_model_file(self, capsys, tmp_path):
        doc = model_to_dict(mg_model(0.3))
        del doc["label"]  # a genuinely custom document
        del doc["params"]
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(
            capsys,
            "capacity", "--model", "custom", "--model-file", str(path), "--n", "4",
        )
        assert code == 0
        rows = parse_csv(out)
        assert rows[0]["closed_form"] == ""  # no closed form for custom models


class TestSweepCommand:
    def test_grid_row_count(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--model", "mg", "--g", "0:0.9:0.1", "--n", "8"
        )
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 10
        closed = [float(r["closed_form"]) for r in rows]
        # Symmetric about the ground point, minimized there.
        assert closed[1] == pytest.approx(closed[9], abs=1e-12)
        assert min(closed) == pytest.approx(0.5, abs=1e-12)

    def test_deterministic_output(self, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        for path in (out_a, out_b):
            assert main(
                [
                    "sweep", "--model", "aklt", "--theta", "0:1.5:0.3",
                    "--n", "6", "-o", str(path),
                ]
            ) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_svg_output(self, tmp_path):
        out = tmp_path / "curve.svg"
        assert main(
            [
                "sweep", "--model", "mg", "--g", "0:0.9:0.1", "--n", "6",
                "--format", "svg", "-o", str(out),
            ]
        ) == 0
        text = out.read_text()
        assert text.startswith("<svg")
        assert "polyline" in text
        assert "capacity (qubits/use)" in text
        # Byte-determinism.
        again = tmp_path / "curve2.svg"
        main(
            [
                "sweep", "--model", "mg", "--g", "0:0.9:0.1", "--n", "6",
                "--format", "svg", "-o", str(again),
            ]
        )
        assert out.read_bytes() == again.read_bytes()

    def test_default_grid_includes_ground_angle(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--model", "aklt", "--n", "4")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 17  # 0.0..1.5 plus the ground angle
        assert any(
            float(r["closed_form"]) == pytest.approx(2 / 3, abs=1e-12) for r in rows
        )

    def test_bad_grid_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--model", "mg", "--g", "0.9:0:0.1", "--n", "4"
        )
        assert code == 2
        assert "error" in err.lower()


class TestSpectrumCommand:
    def test_both_sources_present(self, capsys):
        code, out, _ = run_cli(
            capsys, "spectrum", "--model", "mg", "--g", "0.5", "--n", "4"
        )
        assert code == 0
        rows = parse_csv(out)
        sources = {r["source"] for r in rows}
        assert sources == {"closed_form", "enumeration"}
        closed_mass = sum(
            float(r["value"]) * int(r["multiplicity"])
            for r in rows
            if r["source"] == "closed_form"
        )
        assert closed_mass == pytest.approx(1.0, abs=1e-12)


class TestVerifyCommand:
    def test_passes_at_small_scale(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--model", "mg", "--n-max", "6")
        assert code == 0
        assert "checks passed" in out
        assert "FAIL" not in out


class TestOracleCommand:
    def test_pruned_matches_full(self, capsys):
        code, out, _ = run_cli(
            capsys, "oracle", "--model", "aklt", "--theta-ground", "--n", "7"
        )
        assert code == 0
        (row,) = parse_csv(out)
        assert float(row["max_diff"]) <= 1e-12
        assert row["items_pruned"] == row["items_full"]


class TestChannelCommand:
    def test_two_path_report(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "channel", "--model", "mg", "--g-ground", "--n", "3",
            "--format", "json",
        )
        assert code == 0
        (record,) = json.loads(out)
        assert float(record["two_path_residual"]) <= 1e-9
        assert int(record["kraus_count"]) == 6
        assert float(record["completeness_residual"]) <= 1e-10


class TestConfigAndEnvironment:
    def test_config_file_drives_command(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {
                    "command": "capacity",
                    "model": "mg",
                    "g_ground": True,
                    "n": 4,
                    "estimator": "cond",
                }
            )
        )
        code, out, _ = run_cli(capsys, "--config", str(config))
        assert code == 0
        (row,) = parse_csv(out)
        assert row["n"] == "4"

    def test_cli_overrides_config(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps({"command": "capacity", "model": "mg", "g_ground": True})
        )
        code, out, _ = run_cli(capsys, "--config", str(config), "--n", "3")
        assert code == 0
        rows = parse_csv(out)
        assert all(r["n"] == "3" for r in rows)

    def test_config_without_command_fails(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"model": "mg"}))
        code, _, err = run_cli(capsys, "--config", str(config))
        assert code == 2
        assert "command" in err

    def test_outdir_env_var(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MPSCAP_OUTDIR", str(tmp_path))
        code, _, _ = run_cli(
            capsys,
            "capacity", "--model", "mg", "--g-ground", "--n", "3",
            "-o", "nested/report.csv",
        )
        assert code == 0
        assert (tmp_path / "nested" / "report.csv").exists()


class TestExitCodes:
    def test_missing_parameter_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "capacity", "--model", "aklt", "--n", "4")
        assert code == 2
        assert "theta" in err

    def test_unknown_flag(self, capsys):
        assert run_cli(capsys, "capacity", "--bogus")[0] == 2

    def test_custom_without_file(self, capsys):
        code, _, _ = run_cli(capsys, "capacity", "--model", "custom", "--n", "3")
        assert code == 2


class TestEmitPlot:
    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            emit_plot([(0.0, 1.0)], None)

    def test_flat_series(self, tmp_path):
        path = tmp_path / "flat.svg"
        text = emit_plot([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)], path)
        assert path.read_text() == text
        assert "polyline" in text


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "mpscap.cli", "--version"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "mpscap" in result.stdout
