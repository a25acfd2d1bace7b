"""Tests for the command-line front end and its artifact writers."""

import csv
import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from mirrorcut import cli
from mirrorcut import experiments as ex
from mirrorcut.cli import (ConfigError, Grid, RunConfig, emit, emit_grid,
                           parse_angle, parse_split, run)


def _read_csv(path):
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    return rows


class TestParsing:
    @pytest.mark.parametrize("text,expected", [
        ("pi", math.pi),
        ("0.75pi", 0.75 * math.pi),
        ("-0.5pi", -0.5 * math.pi),
        ("2pi", 2 * math.pi),
        ("1.57", 1.57),
        ("0", 0.0),
    ])
    def test_parse_angle(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected, rel=1e-15)

    def test_parse_angle_rejects_garbage(self):
        with pytest.raises(ConfigError):
            parse_angle("halfpi-ish")

    def test_parse_split(self):
        assert parse_split("1/2") == Fraction(1, 2)
        assert parse_split("499/1000") == Fraction(499, 1000)
        for bad in ("0/1", "5/4", "abc"):
            with pytest.raises(ConfigError):
                parse_split(bad)

    def test_grid_validation(self):
        assert list(Grid(0.0, 1.0, 3).values()) == [0.0, 0.5, 1.0]
        with pytest.raises(ConfigError):
            Grid(0.0, 1.0, 0)
        with pytest.raises(ConfigError):
            Grid(2.0, 1.0, 5)


class TestRunConfig:
    def test_round_trip(self):
        cfg = RunConfig(experiment="fig5", R=2.0, split=Fraction(1, 2), lam=32,
                        log_base="2", out="a.csv", json_out="a.json",
                        params={"nbars": [0.0, 5.0], "theta": 0.0},
                        grids={"s": Grid(0.0, 3.0, 61)})
        clone = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
        assert clone == cfg

    def test_validation_names_field(self):
        cfg = RunConfig(experiment="fig2", lam=0)
        with pytest.raises(ConfigError, match="lambda"):
            cfg.validate()
        cfg = RunConfig(experiment="fig2", params={"rho": -1.0})
        with pytest.raises(ConfigError, match="rho"):
            cfg.validate()


class TestEmit:
    def test_empty_records_give_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit([], "csv", path, columns=["index", "x"])
        assert path.read_text() == "index,x\n"

    def test_float_formatting(self, tmp_path):
        path = tmp_path / "one.csv"
        emit([ex.SweepRecord(0, "demo", {"x": math.sqrt(2)}, {"y": 3})], "csv", path)
        assert "1.4142135623730951" in path.read_text()

    def test_line_endings_are_lf(self, tmp_path):
        path = tmp_path / "lf.csv"
        emit([ex.SweepRecord(0, "demo", {"x": 1.0}, {"y": 2.0})], "csv", path)
        raw = path.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")

    def test_json_and_csv_encode_identical_values(self, tmp_path):
        records = ex.phase_averaged_coherent(cli.CavityGeometry(), 16, 1, n_max=4)
        csv_path, json_path = tmp_path / "a.csv", tmp_path / "a.json"
        emit(records, "csv", csv_path, columns=list(ex.FIG3_COLUMNS))
        emit(records, "json", json_path, columns=list(ex.FIG3_COLUMNS))
        rows = _read_csv(csv_path)
        mirror = json.loads(json_path.read_text())
        assert len(rows) == len(mirror)
        for row, obj in zip(rows, mirror):
            for key in ("ratio", "percent", "vacuum_pair_particles"):
                assert float(row[key]) == obj[key]


class TestCliRuns:
    def test_fig2_row_count(self, tmp_path):
        out = tmp_path / "fig2.csv"
        code = run(["fig2", "--k", "1", "--phi-steps", "97", "--lambda", "16",
                    "--out", str(out)])
        assert code == 0
        assert len(_read_csv(out)) == 97 * 3

    def test_determinism_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["fig4", "--points", "7", "--lambda", "16"]
        assert run(argv + ["--out", str(a)]) == 0
        assert run(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_fig6_heatmap_shape(self, tmp_path):
        out = tmp_path / "fig6.csv"
        code = run(["fig6", "--state", "tms", "--s", "0.75", "--theta", "pi",
                    "--m", "4", "--lambda", "16", "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert len(rows) == 4
        assert list(rows[0].keys()) == ["n", "m1", "m2", "m3", "m4"]

    def test_fig5_threshold_column(self, tmp_path):
        out = tmp_path / "fig5.csv"
        code = run(["fig5", "--nbars", "0", "--s-points", "5", "--s-max", "2",
                    "--lambda", "16", "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert all(float(r["s_star"]) == 0.0 for r in rows)

    def test_sweep_and_converge(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run(["sweep", "--family", "thermal", "--param", "nbar",
                    "--start", "0", "--stop", "1", "--count", "5",
                    "--lambda", "16", "--out", str(out)])
        assert code == 0
        assert len(_read_csv(out)) == 5
        out2 = tmp_path / "conv.csv"
        code = run(["converge", "--lambdas", "8,16", "--out", str(out2)])
        assert code == 0
        assert len(_read_csv(out2)) == 2

    def test_validate_prints_deficit(self, capsys):
        assert run(["validate", "--lambda", "8"]) == 0
        captured = capsys.readouterr().out
        assert "worst deficit" in captured
        assert "low-pair" in captured

    def test_json_mirror_flag(self, tmp_path):
        out, mirror = tmp_path / "f.csv", tmp_path / "f.json"
        code = run(["fig3", "--n-max", "3", "--lambda", "16",
                    "--out", str(out), "--json", str(mirror)])
        assert code == 0
        rows = _read_csv(out)
        objs = json.loads(mirror.read_text())
        assert [float(r["ratio"]) for r in rows] == [o["ratio"] for o in objs]

    def test_log_base_rescales_consistently(self, tmp_path):
        values = {}
        for base in ("e", "2"):
            out = tmp_path / f"fig4_{base}.csv"
            run(["fig4", "--points", "3", "--lambda", "16", "--log-base", base,
                 "--out", str(out)])
            values[base] = [float(r["e_n"]) for r in _read_csv(out)]
        for e_nat, e_two in zip(values["e"], values["2"]):
            assert e_two == pytest.approx(e_nat / math.log(2), rel=1e-12, abs=1e-15)


class TestCliErrors:
    def test_unknown_experiment_is_config_error(self):
        assert run(["fig7"]) == 2

    def test_bad_grid_is_config_error(self, capsys):
        assert run(["fig2", "--phi-steps", "0"]) == 2
        assert "count" in capsys.readouterr().err

    def test_bad_split_names_field(self, capsys):
        assert run(["fig2", "--split", "3/2"]) == 2
        assert "split" in capsys.readouterr().err

    def test_unwritable_path_is_runtime_error(self, tmp_path):
        target = tmp_path / "no_such_dir" / "out.csv"
        assert run(["fig3", "--lambda", "8", "--n-max", "4", "--out", str(target)]) == 3

    def test_env_threads_validated(self, monkeypatch):
        monkeypatch.setenv("MIRRORCUT_THREADS", "many")
        assert run(["fig3", "--lambda", "8", "--n-max", "4"]) == 2

    def test_env_threads_used(self, tmp_path, monkeypatch):
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        argv = ["fig4", "--points", "5", "--lambda", "16"]
        assert run(argv + ["--out", str(serial)]) == 0
        monkeypatch.setenv("MIRRORCUT_THREADS", "4")
        assert run(argv + ["--out", str(threaded)]) == 0
        assert serial.read_bytes() == threaded.read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "fig3.csv"
    proc = subprocess.run([sys.executable, "-m", "mirrorcut", "fig3",
                           "--lambda", "8", "--n-max", "4", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_n_max_beyond_cutoff_is_config_error(capsys):
    assert run(["fig3", "--lambda", "8"]) == 2  # default n-max of 10 exceeds lambda
    assert "n_max" in capsys.readouterr().err


def test_heatmap_grid_emit_json(tmp_path):
    grid = ex.entanglement_distribution(cli.CavityGeometry(), 8, "vacuum", 2)
    path = tmp_path / "grid.json"
    emit_grid(grid, "json", path)
    data = json.loads(path.read_text())
    assert data["m"] == 2
    assert np.array(data["values"]).shape == (2, 2)
