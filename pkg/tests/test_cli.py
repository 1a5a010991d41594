from __future__ import annotations

import json
import math

import numpy as np
import pytest

from latvortex import calculus, cli


def write_config(tmp_path, **overrides):
    cfg = {
        "model": "both",
        "dim": 2,
        "lambda": 1.0,
        "vortices": [{"coords": [0, 0], "multiplicity": 1}],
        "schedule": [4, 8],
        "seed": 0,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [row.split(",") for row in lines[1:]]


def test_run_outputs(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["run", str(write_config(tmp_path)), "--output-dir", str(out), "--quiet"]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted([
        "field_abelian_higgs_L004.csv", "field_abelian_higgs_L008.csv", "field_chern_simons_L004.csv",
        "field_chern_simons_L008.csv", "report.json", "series_abelian_higgs.csv", "series_chern_simons.csv",
        "timings.json",
    ])
    header, rows = read_csv(out / "field_chern_simons_L008.csv")
    assert header == ["x_1", "x_2", "d", "u"]
    coords = [tuple(int(c) for c in r[:2]) for r in rows]
    assert coords == sorted(coords) and len(coords) == 17 * 17 + 4 * 17
    assert all(int(r[2]) == abs(int(r[0])) + abs(int(r[1])) for r in rows)
    report = json.loads((out / "report.json").read_text())
    assert report["schema_version"] == cli.REPORT_SCHEMA_VERSION
    assert report["abelian_higgs"]["sandwich_verdict"] is True
    assert report["trivial"] is False
    assert report["config"]["K_cs"] is None
    for rec in report["chern_simons"]["domains"]:
        assert rec["monotone_descent"] and rec["energy_descent"] and rec["flux_identity"] and rec["tail_bound_ok"]


def test_field_dump_round_trips_to_report(tmp_path):
    out = tmp_path / "out"
    cli.main(["run", str(write_config(tmp_path)), "--output-dir", str(out), "--quiet"])
    _, rows = read_csv(out / "field_chern_simons_L004.csv")
    u_min = min(float(r[3]) for r in rows)
    report = json.loads((out / "report.json").read_text())
    assert report["chern_simons"]["domains"][0]["min_u"] == u_min
    inner = [float(r[3]) for r in rows if max(abs(int(r[0])), abs(int(r[1]))) <= 4]
    assert math.sqrt(sum(x * x for x in inner)) == pytest.approx(report["chern_simons"]["domains"][0]["l2_norm"],
                                                                  rel=1e-15)
    for r in rows:
        assert cli._fmt(float(r[3])) == r[3]


def test_series_file(tmp_path):
    out = tmp_path / "out"
    cli.main(["run", str(write_config(tmp_path, model="chern_simons")), "--output-dir", str(out), "--quiet"])
    assert not (out / "field_abelian_higgs_L004.csv").exists()
    header, rows = read_csv(out / "series_chern_simons.csv")
    assert header == ["d", "log_abs_u"] and len(rows) == 17 * 17


def test_trivial_config(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["run", str(write_config(tmp_path, vortices=[])), "--output-dir", str(out), "--quiet"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["trivial"] is True
    _, rows = read_csv(out / "field_chern_simons_L008.csv")
    assert all(float(r[3]) == 0.0 for r in rows)
    assert (out / "series_chern_simons.csv").read_text() == "d,log_abs_u\n"


def test_determinism(tmp_path):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["run", str(cfg), "--output-dir", str(a), "--quiet"])
    cli.main(["run", str(cfg), "--output-dir", str(b), "--quiet"])
    for p in sorted(a.iterdir()):
        if p.name != "timings.json":
            assert p.read_bytes() == (b / p.name).read_bytes(), p.name


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"K_cs": 2.0}, "K_cs"),
        ({"K_ah": 1.0}, "K_ah"),
        ({"lambda": -1}, "lambda"),
        ({"dim": 1}, "dim"),
        ({"model": "maxwell"}, "model"),
        ({"schedule": [8, 4]}, "schedule"),
        ({"tol_linear": 1e-9}, "tol_linear"),
        ({"vortices": [{"coords": [0, 0], "multiplicity": 0}]}, "vortices[0].multiplicity"),
        ({"vortices": [{"coords": [0, 0, 0], "multiplicity": 1}]}, "vortices[0].coords"),
        ({"vortices": [{"coords": [9, 0], "multiplicity": 1}]}, "vortices"),
        ({"decay": {"annulus": [0.8, 0.2]}}, "decay.annulus"),
        ({"decay": {"width": 3}}, "decay.width"),
        ({"lamda": 1.0}, "lamda"),
    ],
)
def test_validation_errors(tmp_path, capsys, overrides, field):
    out = tmp_path / "out"
    code = cli.main(["run", str(write_config(tmp_path, **overrides)), "--output-dir", str(out), "--quiet"])
    assert code != 0
    record = json.loads((out / "error.json").read_text())
    assert record["stage"] == "validation" and record["field"] == field
    assert not (out / "report.json").exists()
    assert field in capsys.readouterr().err


def test_missing_key(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"model": "both", "dim": 2, "lambda": 1.0}))
    assert cli.main(["run", str(path), "--output-dir", str(tmp_path / "o"), "--quiet"]) == 2


def test_solver_stage_error_is_recorded(tmp_path):
    out = tmp_path / "out"
    code = cli.main(["run", str(write_config(tmp_path, max_outer_iter=3)), "--output-dir", str(out), "--quiet"])
    assert code == 1
    record = json.loads((out / "error.json").read_text())
    assert record["stage"] == "chern_simons" and record["error"] == "NonConvergenceError"


def test_output_dir_from_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["run", str(write_config(tmp_path, output_dir="from_cfg")), "--quiet"]) == 0
    assert (tmp_path / "from_cfg" / "report.json").exists()


def test_verify_all_pass(tmp_path, capsys):
    assert cli.main(["verify", str(write_config(tmp_path))]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(cli.BATTERY)
    assert all(line.startswith("PASS") for line in lines)


def test_verify_seed_robust(tmp_path):
    verdicts = []
    for seed in (0, 12345):
        cfg = cli.parse_config(json.loads(write_config(tmp_path, seed=seed).read_text()))
        verdicts.append([(name, ok) for name, ok, _ in cli.verify(cfg)])
    assert verdicts[0] == verdicts[1]
    assert all(ok for _, ok in verdicts[0])


def test_verify_catches_laplacian_sign_flip(tmp_path, monkeypatch, capsys):
    real = calculus.laplacian_values
    monkeypatch.setattr(calculus, "laplacian_values", lambda f: -real(f))
    cfg = cli.parse_config(json.loads(write_config(tmp_path).read_text()))
    results = cli.verify(cfg)
    failed = [name for name, ok, _ in results if not ok]
    assert failed and failed[0] == "green_identity"
    assert cli.main(["verify", str(write_config(tmp_path)), "--quiet"]) == 1
    assert "green_identity" in capsys.readouterr().err


def test_format_is_locale_independent():
    assert cli._fmt(-0.0) == "0"
    assert cli._fmt(0.1) == "0.10000000000000001"
    assert float(cli._fmt(-5.4966)) == -5.4966


def test_json_safe_handles_numpy():
    assert json.loads(cli.dumps_json({"a": np.float64(1.5), "b": [np.int64(3)], "c": float("nan")})) == \
        {"a": 1.5, "b": [3], "c": None}
