import csv
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from spaceform import cli


def run(tmp_path, *argv):
    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        return cli.main(list(argv))
    finally:
        os.chdir(cwd)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_verify_bicons_r3_passes(tmp_path):
    assert run(tmp_path, "verify", "bicons_r3", "--C0", "1", "--out", "r.json") == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["schema"] == "1"
    assert {"surface", "params", "grid", "entries", "verdicts", "meta"} <= set(rep)
    e = rep["entries"][0]
    assert {"name", "max_abs", "max_rel", "l2_mean", "worst_node", "scale"} <= set(e)
    v = {x["claim"]: x for x in rep["verdicts"]}
    assert v["biconservative"]["status"] == "pass"
    assert {"claim", "status", "tolerance"} <= set(v["biconservative"])


def test_verify_negative_control_exits_one(tmp_path):
    assert run(tmp_path, "verify", "small_hypersphere", "--m", "2", "--r", "0.9", "--out", "s.json") == 1


def test_unknown_surface_exits_two(tmp_path, capsys):
    assert run(tmp_path, "verify", "nosuch") == 2
    assert "unknown surface" in capsys.readouterr().err


def test_parameter_not_accepted_by_family_exits_two(tmp_path):
    assert run(tmp_path, "verify", "cone_r3", "--C0", "2") == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "cone_r3", "--counts", "5,5"),
        ("verify", "cone_r3", "--counts", "a,b"),
        ("verify", "cone_r3", "--claim-tol", "metric"),
        ("verify", "cone_r3", "--claim-tol", "nosuch=1"),
        ("verify", "cone_r3", "--jobs", "0"),
        ("verify", "cone_r3", "--jet-levels", "7"),
    ],
)
def test_bad_overrides_exit_two(tmp_path, argv):
    assert run(tmp_path, *argv) == 2


def test_argparse_usage_error_exits_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "verify")
    assert exc.value.code == 2


def test_numerical_failure_exits_three(tmp_path, capsys):
    # the chart's pole lies on the grid: the induced metric degenerates there
    code = run(tmp_path, "verify", "small_hypersphere", "--m", "2", "--ranges", "0:3.14159,0:6.283185307179586")
    assert code == 3
    assert "DegenerateChartError" in capsys.readouterr().err


def test_jobs_from_environment_and_byte_identical_reports(tmp_path, monkeypatch):
    assert run(tmp_path, "verify", "cone_r3", "--no-meta", "--out", "a.json", "--jobs", "1") == 0
    monkeypatch.setenv("SPACEFORM_JOBS", "3")
    assert run(tmp_path, "verify", "cone_r3", "--no-meta", "--out", "b.json") == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert "meta" not in json.loads((tmp_path / "a.json").read_text())
    monkeypatch.setenv("SPACEFORM_JOBS", "many")
    assert run(tmp_path, "verify", "cone_r3") == 2


def test_csv_report_uses_seventeen_digits(tmp_path):
    assert run(tmp_path, "verify", "cone_r3", "--format", "csv", "--out", "r.csv") == 0
    with open(tmp_path / "r.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    kinds = {r["kind"] for r in rows}
    assert kinds == {"entry", "verdict"}
    value = next(r["max_abs"] for r in rows if r["name"] == "grad_f_norm")
    assert float(value) == float(format(float(value), ".17g"))
    assert len(value.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) >= 15


def test_atomic_writes_leave_no_temporaries(tmp_path):
    assert run(tmp_path, "verify", "cone_r3", "--out", "r.json", "--figures") == 0
    names = sorted(os.listdir(tmp_path))
    assert names == ["r.json", "r_residuals.png"]


def test_ode_inadmissible_constant_cites_bound(tmp_path, capsys):
    assert run(tmp_path, "ode", "--c1", "16") == 2
    assert "64/3^(5/4)" in capsys.readouterr().err


def test_ode_constant_below_true_bound_is_rejected(tmp_path):
    # 16.2074001 lies below 64/3^(5/4) = 16.20982796...
    assert run(tmp_path, "ode", "--c1", "16.2074001", "--periods", "1") == 2


def test_ode_near_degenerate_band(tmp_path):
    assert run(tmp_path, "ode", "--c1", "16.2099", "--periods", "1", "--out", "near") == 0
    summary = json.loads((tmp_path / "near.json").read_text())
    lo, hi = summary["kappa_band"]
    assert lo < 3**-0.5 < hi
    assert hi - lo < 5e-3
    assert (tmp_path / "near_phase.png").stat().st_size > 0


def test_ode_full_pipeline_with_verification(tmp_path):
    assert run(tmp_path, "ode", "--c1", "20", "--periods", "10", "--verify", "--figures", "--out", "c20") == 0
    summary = json.loads((tmp_path / "c20.json").read_text())
    assert {"c1_tilde", "period", "max_drift", "kappa_band", "constraint_residual_max"} <= set(summary)
    assert summary["period"] == pytest.approx(3.737067, abs=1e-5)
    assert summary["max_drift"] < 1e-8
    assert summary["constraint_residual_max"] < 1e-6
    assert summary["verification"]["passed"] is True
    header, rows = read_csv(tmp_path / "c20.csv")
    assert header == ["u", "kappa", "kappa_prime", "drift", "sigma1", "sigma2", "sigma3", "sigma4"]
    # integration stops at the first accepted step past the tenth crossing
    assert summary["period"] * 10 <= rows[-1, 0] < summary["period"] * 10.1
    for name in ("c20_phase.png", "c20_residuals.png"):
        assert (tmp_path / name).stat().st_size > 0


def test_export_bicons_r3_with_scalars(tmp_path):
    assert run(tmp_path, "export", "bicons_r3", "--C0", "1", "--with-scalars", "--out", "b.csv") == 0
    header, rows = read_csv(tmp_path / "b.csv")
    assert header == ["u", "v", "x1", "x2", "x3", "f", "K"]
    at_zero = rows[rows[:, 0] == 0.0]
    assert len(at_zero) == 65
    assert np.max(np.abs(at_zero[:, 6] + 3.0)) < 1e-6
    assert np.max(np.abs(at_zero[:, 5] - 1.0)) < 1e-8
    # u-major order
    assert np.all(np.diff(rows[:, 0]) >= 0)


def test_export_clifford_torus_rows(tmp_path):
    assert run(tmp_path, "export", "clifford_product", "--m1", "1", "--m2", "1", "--out", "c.csv") == 0
    header, rows = read_csv(tmp_path / "c.csv")
    assert header == ["u", "v", "x1", "x2", "x3", "x4"]
    assert np.max(np.abs(rows[:, 2] ** 2 + rows[:, 3] ** 2 - 0.5)) < 1e-15
    assert np.max(np.abs(rows[:, 4] ** 2 + rows[:, 5] ** 2 - 0.5)) < 1e-15


def test_export_cone_height_is_alpha_times_radius(tmp_path):
    assert run(tmp_path, "export", "cone_r3", "--alpha", "1", "--out", "k.csv") == 0
    _, rows = read_csv(tmp_path / "k.csv")
    assert np.max(np.abs(rows[:, 4] - np.hypot(rows[:, 2], rows[:, 3]))) < 1e-15


def test_list_prints_catalog(capsys, tmp_path):
    assert run(tmp_path, "list") == 0
    idx = json.loads(capsys.readouterr().out)
    assert idx["schema"] == "1"
    assert "bicons_s3" in {e["id"] for e in idx["surfaces"]}


def test_console_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "spaceform.cli", "verify", "nosuch"], capture_output=True, text=True
    )
    assert out.returncode == 2


def test_float_formatting_is_locale_free():
    assert cli.fmt_float(0.1) == "0.10000000000000001"
    assert cli.fmt_float(float("nan")) == "nan"
    assert cli.fmt_float(-math.inf) == "-inf"
