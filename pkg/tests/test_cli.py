import csv
import io
import json
import subprocess
import sys

import pytest

from gl3sub.cli import int_range, main, read_config, run
from gl3sub.errors import InputError
from gl3sub.gl3.coefficients import eisenstein_table, write_coefficients
from gl3sub.gl3.params import GL3Params


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def _json(text):
    return json.loads(text)


def test_int_range_forms():
    assert int_range("1..4") == [1, 2, 3, 4]
    assert int_range("3..1") == []
    assert int_range("-1,5") == [-1, 5]
    assert int_range("") == []


def test_kloosterman_table():
    rows = _csv(run(["kloosterman", "--a", "1", "--b", "1", "--c", "1..10", "--format", "csv"])[0])
    assert len(rows) == 10
    three = next(r for r in rows if r["c"] == "3")
    assert abs(float(three["S_re"]) + 1) < 1e-12 and abs(float(three["S_im"])) < 1e-12
    assert all(float(r["margin"]) >= 0 for r in rows)


def test_kloosterman_empty_range():
    text, _ = run(["kloosterman", "--c", "5..4", "--format", "csv"])
    assert _csv(text) == []
    assert _json(run(["kloosterman", "--c", "5..4"])[0])["rows"] == []


def test_delta_rows_and_format_parity():
    argv = ["delta", "--n=-6..6", "--Q", "4"]
    rows_csv = _csv(run(argv + ["--format", "csv"])[0])
    doc = _json(run(argv)[0])
    assert doc["schema_version"] == 1
    assert len(rows_csv) == len(doc["rows"]) == 13
    for c, j in zip(rows_csv, doc["rows"]):
        assert int(c["n"]) == j["n"]
        assert float(c["value"]) == j["value"]
    zero = next(r for r in doc["rows"] if r["n"] == 0)
    assert abs(zero["value"] - 1) < 1e-12
    assert all(r["residual"] < 1e-9 for r in doc["rows"])


def test_udagger_summary_and_support():
    doc = _json(run(["udagger", "--x0", "0.6,3.0", "--beta-exp", "9..13"])[0])
    summary = doc["rows"][-1]
    assert summary["kind"] == "summary"
    assert -1.7 <= summary["exponent"] <= -1.3
    outside = [r for r in doc["rows"] if r["kind"] == "point" and r["x0"] == 3.0]
    assert outside and all(r["main_re"] == 0 and r["main_im"] == 0 for r in outside)


def test_udagger_seeded_grid_is_reproducible():
    argv = ["udagger", "--x0", "0.6", "--random", "2", "--beta-exp", "9..10", "--seed", "5"]
    assert run(argv)[0] == run(argv)[0]
    assert run(argv)[0] != run(argv[:-1] + ["6"])[0]


def test_huxley_demo_within_envelope():
    rows = _json(run(["huxley-demo"])[0])["rows"]
    assert len(rows) == 6 and all(r["within"] for r in rows)


def test_gamma3_value_at_minus_half():
    rows = _json(run(["gamma3", "--tau", "0,50"])[0])["rows"]
    assert abs(rows[0]["gamma0_re"] - 0.5) < 1e-12 and abs(rows[0]["gamma0_im"]) < 1e-12
    assert rows[1]["growth_plus"] < 2 and rows[1]["growth_minus"] < 2


def test_voronoi_missing_file(tmp_path, capsys):
    assert main(["voronoi", "--table", str(tmp_path / "absent.txt")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_voronoi_refuses_non_cuspidal(tmp_path, capsys):
    path = tmp_path / "eis.txt"
    write_coefficients(eisenstein_table(GL3Params.from_alpha([0, 0.3j, -0.3j]), 200), path)
    assert main(["voronoi", "--table", str(path), "--q", "1", "--center", "20"]) == 2
    assert "refused" in capsys.readouterr().err


def test_voronoi_polar_mode_on_generated_table():
    doc = _json(run(["voronoi", "--builtin", "eisenstein", "--allow-eisenstein", "--q", "1,3"])[0])
    assert all(r["within"] for r in doc["rows"])


def test_afe_reference_column():
    rows = _json(run(["afe", "--t", "5", "--depth", "3000"])[0])["rows"]
    assert rows[0]["residual"] < 1e-8


def test_pipeline_report():
    doc = _json(run(["pipeline", "--N", "200", "--t", "15", "--Q", "3"])[0])
    row = doc["rows"][0]
    assert row["within"] and row["residual"] <= row["tol"]
    assert {"backend", "numpy", "python"} <= set(doc["runtime"])
    assert doc["metadata"]["x_nodes"] > 0 and doc["metadata"]["n_terms"] == 201
    assert "wall_seconds" not in doc["metadata"]
    timed = _json(run(["pipeline", "--N", "100", "--t", "10", "--Q", "2", "--timing"])[0])
    assert timed["metadata"]["wall_seconds"] > 0


def test_pipeline_guard_exit_code(capsys):
    assert main(["pipeline", "--N", "3000", "--t", "15", "--Q", "3"]) == 3
    assert main(["pipeline", "--N", "200", "--t", "15", "--Q", "3", "--require-window"]) == 3
    capsys.readouterr()


def test_budget_exit_code(monkeypatch, capsys):
    from gl3sub.errors import BudgetExceeded

    def boom(args):
        raise BudgetExceeded("node cap")

    monkeypatch.setattr("gl3sub.cli.cmd_delta", boom)
    assert main(["delta"]) == 4
    assert "node cap" in capsys.readouterr().err


def test_scan_rows_flags_and_rerun(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["scan", "--t", "20", "--N", "100,200,400", "--format", "csv"]
    assert main(argv + ["--output", str(out1)]) == 0
    assert main(argv + ["--output", str(out2), "--workers", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = _csv(out1.read_text())
    assert [r["N"] for r in rows] == ["100", "200", "400"]
    assert "clamped" in rows[0]["flags"]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# delta run\nQ = 5\nn = -2..2\nformat = csv\n")
    rows = _csv(run(["delta", "--config", str(cfg)])[0])
    assert {r["Q"] for r in rows} == {"5"} and len(rows) == 5
    rows = _csv(run(["delta", "--config", str(cfg), "--Q", "2"])[0])
    assert {r["Q"] for r in rows} == {"2"}


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    with pytest.raises(InputError):
        read_config(bad)
    bad.write_text("unknown_key = 3\n")
    assert main(["delta", "--config", str(bad)]) == 2


def test_bad_flag_value_exits_two():
    with pytest.raises(SystemExit) as e:
        main(["delta", "--n", "x..y"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv", [
    ["kloosterman", "--c", "1..30"],
    ["delta", "--Q", "6", "--n=-10..10"],
    ["gamma3"],
    ["pipeline", "--N", "150", "--t", "12", "--Q", "2"],
])
def test_console_script_is_byte_identical(argv, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"{i}.json"
        subprocess.run([sys.executable, "-m", "gl3sub.cli", *argv, "--output", str(path)], check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
