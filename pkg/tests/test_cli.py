import csv
import json

import pytest

from ballgalerkin.cli import StudyConfig, main, parse_degrees, raw_path, run_study


def _read(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_study_single_degree(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["study", "--problem", "ball_a07_b09", "--degrees", "3..3", "--out", str(out)]) == 0
    rows = _read(out)
    assert len(rows) == 1
    assert rows[0]["n"] == "3" and rows[0]["N_n"] == "20" and rows[0]["q"] == "5"
    raw = _read(raw_path(out))
    assert float(raw[0]["assemble_seconds"]) >= 0
    assert float(raw[0]["max_error"]) > 0


def test_study_columns_and_no_cond(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["study", "--problem", "planar_a05", "--degrees", "2..6", "--quad", "12",
                 "--out", str(out), "--no-cond"]) == 0
    rows = _read(out)
    assert [r["n"] for r in rows] == ["2", "3", "4", "5", "6"]
    assert [int(r["N_n"]) for r in rows] == [6, 10, 15, 21, 28]
    assert all(r["condition_number"] == "" for r in rows)
    assert all(r["q"] == "12" for r in rows)
    assert rows[0]["max_error"].endswith("E-01")


def test_study_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["study", "--problem", "planar_a05", "--degrees", "2..12", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_solve_prints_summary_and_grid(capsys):
    assert main(["solve", "--problem", "planar_a05", "--degree", "10", "--eval-grid"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("problem=planar_a05 d=2 n=10 N=66 q=12")
    assert out[1].startswith("max_error=9.6")
    assert out[2] == "x,y,s0,s1,u_n,u,error"
    assert len(out) == 3 + 201


def test_errors_exit_nonzero(capsys):
    assert main(["solve", "--problem", "hexagon", "--degree", "3"]) == 1
    assert "error: unknown problem" in capsys.readouterr().err


def test_json_problem(tmp_path, capsys):
    cfg = tmp_path / "disk.json"
    cfg.write_text(json.dumps({"map": "identity2", "gamma": "zero", "solution": "bubble_over_2d"}))
    assert main(["solve", "--problem", str(cfg), "--degree", "2"]) == 0
    err = float(capsys.readouterr().out.splitlines()[1].split("=")[1])
    assert err < 1e-12


def test_thread_cap_env(tmp_path, monkeypatch):
    monkeypatch.setenv("BALLGALERKIN_NUM_THREADS", "1")
    assert main(["study", "--problem", "poisson_disk", "--degrees", "0..2", "--out", str(tmp_path / "p.csv")]) == 0


def test_config_validation():
    assert parse_degrees("2..25") == (2, 25)
    assert parse_degrees("4") == (4, 4)
    with pytest.raises(ValueError):
        StudyConfig("planar_a05", (5, 2))
    with pytest.raises(ValueError):
        StudyConfig("planar_a05", (1, 2), quad_q=0)


def test_run_study_rows():
    rows = run_study(StudyConfig("poisson_ball", (0, 2)))
    assert [r["N_n"] for r in rows] == [1, 4, 10]
    assert all(r["max_error"] < 1e-12 for r in rows)
