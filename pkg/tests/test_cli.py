import json
import math

import numpy as np
import pytest

import ldkit as lk
from ldkit import cli


def run(args):
    return cli.run(args)


def test_models_listing(capsys):
    assert run(["models"]) == 0
    out = capsys.readouterr().out
    for name in lk.MODEL_NAMES:
        assert name in out


def test_landscape_peak_at_separatrix(tmp_path):
    out = tmp_path / "l.csv"
    rc = run(["landscape", "--model", "pendulum", "--emin", "-2", "--emax", "1",
              "--n", "601", "--out", str(out)])
    assert rc == 0
    ls = lk.read_landscape_csv(out)
    assert len(ls.energies) == 601
    assert ls.energies[int(np.argmax(ls.lengths))] == 0.0


def test_map_row_count_and_pgm(tmp_path):
    out = tmp_path / "m.csv"
    pgm = tmp_path / "m.pgm"
    rc = run(["map", "--model", "pendulum",
              "--bounds", "-3.14159265,3.14159265,-2.5,2.5",
              "--grid", "20x10", "--quantity", "ell",
              "--out", str(out), "--pgm", str(pgm)])
    assert rc == 0
    assert sum(1 for _ in open(out)) == 1 + 200
    assert pgm.read_bytes().startswith(b"P5\n20 10\n65535\n")


def test_map_energy_quantity(tmp_path):
    out = tmp_path / "e.csv"
    rc = run(["map", "--model", "harmonic-oscillator", "--bounds", "0,1,0,1",
              "--grid", "3x3", "--quantity", "energy", "--out", str(out)])
    assert rc == 0
    g = lk.read_grid_csv(out, quantity="energy")
    assert g.values[0, 0] == 0.0
    assert g.values[2, 2] == 1.0


def test_bmap_matches_in_process(tmp_path, pend):
    spec = lk.GridSpec(-3.0, 3.0, -2.0, 2.0, 10, 8)
    grid = lk.ell_map(pend, spec)
    src = tmp_path / "ell.csv"
    lk.write_grid_csv(grid, src)

    mine = tmp_path / "b_mine.csv"
    lk.write_grid_csv(lk.b_map(grid), mine)
    theirs = tmp_path / "b_cli.csv"
    assert run(["bmap", "--in", str(src), "--out", str(theirs)]) == 0
    assert mine.read_bytes() == theirs.read_bytes()


def test_temporal_line(tmp_path):
    out = tmp_path / "t.csv"
    rc = run(["temporal", "--model", "pendulum", "--t", "5",
              "--line", "fixed=q:0,range=1.5:2.5:11", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,ld,ld_plus,ld_minus,flag"
    assert len(lines) == 12


def test_temporal_bad_line_spec(tmp_path):
    rc = run(["temporal", "--model", "pendulum", "--t", "5",
              "--line", "fixed=z:0,range=0:1:5", "--out", str(tmp_path / "x.csv")])
    assert rc == 1


def test_rates_stdout_json(capsys):
    rc = run(["rates", "--model", "pendulum", "--critical", "elliptic"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["model"] == "pendulum"
    assert len(report["fits"]) == 1
    fit = report["fits"][0]
    assert fit["critical"] == "elliptic"
    assert -0.55 < fit["exponent"] < -0.45
    assert fit["r2"] >= 0.999


def test_rates_file_and_sides(tmp_path):
    out = tmp_path / "r.json"
    rc = run(["rates", "--model", "harmonic-repulsor", "--critical", "separatrix",
              "--side", "above", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["truncation"] is None
    assert [f["side"] for f in report["fits"]] == ["above"]
    assert report["fits"][0]["exponent"] == pytest.approx(-0.5, abs=1e-4)


def test_usage_errors(tmp_path):
    assert run(["landscape", "--model", "rotor", "--emin", "0", "--emax", "1",
                "--n", "5", "--out", str(tmp_path / "x.csv")]) == 1
    assert run(["landscape", "--model", "pendulum", "--emin", "0",
                "--out", str(tmp_path / "x.csv")]) == 1
    assert run(["map", "--model", "pendulum", "--bounds", "0,1,0", "--grid",
                "4x4", "--out", str(tmp_path / "x.csv")]) == 1
    assert run(["map", "--model", "pendulum", "--bounds", "0,1,0,1", "--grid",
                "4by4", "--out", str(tmp_path / "x.csv")]) == 1


def test_missing_truncation_is_usage_error(tmp_path):
    rc = run(["landscape", "--model", "fishtail", "--emin", "-32", "--emax", "1",
              "--n", "5", "--out", str(tmp_path / "f.csv")])
    assert rc == 1


def test_unconverged_exit_code(tmp_path):
    args = ["landscape", "--model", "pendulum", "--emin", "-1.99",
            "--emax", "0.9", "--n", "7", "--quad-rel-tol", "1e-15",
            "--quad-abs-tol", "1e-15", "--quad-max-levels", "4",
            "--out", str(tmp_path / "nc.csv")]
    assert run(args) == 2
    assert run(args + ["--best-effort"]) == 0


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["landscape", "--model", "duffing", "--emin", "-0.25", "--emax",
            "0.5", "--n", "21", "--derivs"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bounded_librations_flag(tmp_path):
    out = tmp_path / "fb.csv"
    rc = run(["landscape", "--model", "fishtail", "--bounded-librations",
              "--emin", "-32", "--emax", "0", "--n", "9", "--out", str(out)])
    assert rc == 0
    ls = lk.read_landscape_csv(out)
    assert np.all(ls.lengths >= 0.0)


def test_threads_flag_identical_output(tmp_path):
    base = ["map", "--model", "pendulum", "--bounds", "-2,2,-2,2",
            "--grid", "8x8", "--quantity", "temporal", "--t", "3"]
    a, b = tmp_path / "t1.csv", tmp_path / "t4.csv"
    assert run(base + ["--out", str(a)]) == 0
    assert run(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
