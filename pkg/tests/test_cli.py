import json
import subprocess
import sys
from pathlib import Path

import pytest

from wlogrank.cli import main
from wlogrank.logrank import make_weights, weighted_logrank
from wlogrank.survival import build_risk_table, read_csv

EXAMPLE = Path(__file__).resolve().parent.parent / "data" / "example_trial.csv"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_lrt_matches_library(capsys):
    code, out, _ = run(capsys, "analyze", "--input", EXAMPLE, "--method", "lrt")
    assert code == 0
    result = json.loads(out)
    table = build_risk_table(read_csv(EXAMPLE))
    ref = weighted_logrank(table, make_weights(table, "standard"))
    assert result["method"] == "lrt" and result["t_star"] is None
    assert (result["U"], result["V"], result["z"], result["p_one_sided"]) == (
        ref.statistic, ref.variance, ref.z, ref.p_one_sided
    )


def test_mwlrt_zero_pivot_equals_lrt(capsys):
    _, a, _ = run(capsys, "analyze", "--input", EXAMPLE, "--method", "lrt")
    _, b, _ = run(capsys, "analyze", "--input", EXAMPLE, "--method", "mwlrt", "--tstar", "0")
    a, b = json.loads(a), json.loads(b)
    assert all(a[k] == b[k] for k in ("U", "V", "z", "p_one_sided"))


@pytest.mark.parametrize("method", [["--method", "mwlrt:18"], ["--method", "landmark", "--tstar", "27"], ["--method", "wlrt:6"]])
def test_analyze_methods(capsys, method):
    code, out, _ = run(capsys, "analyze", "--input", EXAMPLE, *method, "--two-sided")
    assert code == 0
    result = json.loads(out)
    assert {"method", "t_star", "U", "V", "z", "p_one_sided", "chi2", "p_two_sided"} <= result.keys()


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "--input", tmp_path / "missing.csv")
    assert code == 4
    assert json.loads(err)["error"] == "io"


def test_malformed_csv_names_line(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,event,arm\n1,1,0\n2,7,1\n")
    code, _, err = run(capsys, "analyze", "--input", path)
    assert code == 2
    assert "line 3" in json.loads(err)["message"]


def test_degenerate_exit_code(capsys, tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("time,event,arm\n1,1,0\n5,0,1\n")
    code, _, err = run(capsys, "analyze", "--input", path, "--method", "landmark:0.5")
    assert code == 3
    assert json.loads(err)["error"] == "degenerate"


def test_simulate_requires_seed(capsys):
    code, _, err = run(capsys, "simulate", "--scenario", "I")
    assert code == 2


def test_simulate_then_analyze(capsys, tmp_path):
    path = tmp_path / "sim.csv"
    assert run(capsys, "simulate", "--scenario", "III", "--seed", 11, "--out", path)[0] == 0
    first = path.read_bytes()
    assert run(capsys, "simulate", "--scenario", "III", "--seed", 11, "--out", path)[0] == 0
    assert path.read_bytes() == first
    code, out, _ = run(capsys, "analyze", "--input", path, "--method", "mwlrt:12")
    assert code == 0 and json.loads(out)["t_star"] == 12


def test_analyze_is_byte_identical(capsys):
    a = run(capsys, "analyze", "--input", EXAMPLE, "--method", "mwlrt:18")[1]
    b = run(capsys, "analyze", "--input", EXAMPLE, "--method", "mwlrt:18")[1]
    assert a == b


def test_scores_csv(capsys):
    code, out, _ = run(capsys, "scores", "--input", EXAMPLE, "--method", "mwlrt:18")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,c,C,w"
    rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert len(rows) == build_risk_table(read_csv(EXAMPLE)).k
    assert all(r1[1] >= r2[1] - 1e-12 for r1, r2 in zip(rows, rows[1:]))


def test_scores_rejects_landmark(capsys):
    assert run(capsys, "scores", "--input", EXAMPLE, "--method", "landmark:20")[0] == 2


def test_power_and_efficiency(capsys, tmp_path):
    out = tmp_path / "p.csv"
    code, _, _ = run(capsys, "power", "--scenarios", "I,IV", "--methods", "lrt,mwlrt:18", "--reps", 20, "--seed", 5, "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scenario,method,t_star,n_reps,rejections,rejection_rate,mc_se,degenerate_count"
    assert len(lines) == 5
    code, text, _ = run(capsys, "efficiency", "--power-a", 0.796, "--power-b", 0.697)
    assert code == 0 and round(json.loads(text)["relative_efficiency"]) == 127


@pytest.mark.parametrize(
    "argv",
    [
        ["power", "--seed", "1", "--scenarios", "V"],
        ["power", "--seed", "1", "--alpha", "0.7"],
        ["efficiency", "--power-a", "1.0", "--power-b", "0.5"],
        ["analyze", "--input", str(EXAMPLE), "--method", "mwlrt"],
    ],
)
def test_validation_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wlogrank", "analyze", "--input", str(EXAMPLE), "--method", "lrt"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["method"] == "lrt"
