import json
import math
import subprocess
import sys

import pytest

from raina_hh.cli import main

CFG = """
seed = 3
n_paths = 5
[kernel]
rho = [1.0]
lambda = [0.5, 1.5]
omega = [0.5]
[process]
family = "random_polynomial"
coefficients = ["normal(0,1)", "normal(0,1)", "uniform(0,1)"]
interval = [0.0, 2.0]
convexity = "convex"
[output]
csv = "summary.csv"
json = "detail.json"
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_raina(capsys):
    code, out, err = run(capsys, "eval-raina", "--x", "1")
    assert code == 0 and float(out) == pytest.approx(math.e, abs=1e-12)
    assert "terms_used=" in err
    code, out, _ = run(capsys, "eval-raina", "--rho", "2", "--lambda", "2", "--x", "1")
    assert float(out) == pytest.approx(math.sinh(1.0), abs=1e-12)


def test_frac_int(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "frac-int", "--lambda", "0.5", "--omega", "0", "--sigma", "list:1", "--process", "poly:1",
                       "--base", "0", "--x", "1", "--out", str(out_file))
    assert code == 0 and "mean=" in out
    mean = float(out.split()[0].split("=")[1])
    assert mean == pytest.approx(1 / math.gamma(1.5), abs=1e-14)
    rec = json.loads(out_file.read_text())["records"][0]
    assert rec["side"] == "left" and rec["n_paths"] == 1
    code, out, _ = run(capsys, "frac-int", "--process", "random:uniform(0,1);normal(0,1)", "--base", "1", "--x", "0",
                       "--paths", "10", "--seed", "4", "--out", str(tmp_path / "r.csv"))
    assert code == 0 and "n_paths=10" in out
    assert (tmp_path / "r.csv").read_text().startswith("# schema:")


def test_hh_check(capsys):
    code, out, _ = run(capsys, "hh-check", "--omega", "0", "--process", "poly:t^2", "--u", "0", "--v", "1")
    assert code == 0 and out.strip().endswith("PASS")
    code, out, _ = run(capsys, "hh-check", "--process", "poly:-t^2", "--u", "0", "--v", "1")
    assert code == 2 and "VIOLATIONS" in out
    code, out, _ = run(capsys, "hh-check", "--process", "poly:2t^2", "--u", "0", "--v", "1", "--omega", "0",
                       "--modulus", "const(1)")
    assert code == 0 and "left_corr=0.58333333333333" in out
    code, out, _ = run(capsys, "hh-check", "--rho", "2", "--omega", "-5", "--process", "poly:t^2", "--u", "0", "--v", "1")
    assert code == 3 and "HYPOTHESIS_UNVERIFIED" in out


def test_identity_and_reduce(capsys):
    for side in ("left", "right"):
        code, out, _ = run(capsys, "identity-check", "--rho", "0.7", "--lambda", "0.6", "--omega", "0.9",
                           "--sigma", "harmonic", "--p", "2", "--u", "-1", "--v", "2", "--side", side)
        assert code == 0 and out.strip().endswith("PASS")
    code, out, _ = run(capsys, "reduce-check", "--alpha", "0.5", "--process", "random:normal(0,1);normal(0,1);uniform(0,1)",
                       "--u", "0", "--v", "1", "--paths", "20")
    assert code == 0 and "PASS" in out


def test_run_and_rerun(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.toml"
    cfg.write_text(CFG)
    monkeypatch.setenv("RAINA_HH_OUT", str(tmp_path / "a"))
    code, out, _ = run(capsys, "run", str(cfg))
    assert code == 0 and out.count(": ok") == 2
    first = (tmp_path / "a" / "summary.csv").read_bytes(), (tmp_path / "a" / "detail.json").read_bytes()
    monkeypatch.setenv("RAINA_HH_OUT", str(tmp_path / "b"))
    code, _, _ = run(capsys, "run", str(cfg), "--workers", "3")
    second = (tmp_path / "b" / "summary.csv").read_bytes(), (tmp_path / "b" / "detail.json").read_bytes()
    assert first == second


def test_errors(capsys, tmp_path):
    code, _, err = run(capsys, "run", str(tmp_path / "none.toml"))
    assert code == 1 and "config error" in err
    code, _, err = run(capsys, "hh-check", "--process", "bogus", "--u", "0", "--v", "1")
    assert code == 1 and "unknown process spec" in err
    code, _, err = run(capsys, "eval-raina", "--lambda", "-1", "--x", "1")
    assert code == 1 and "DomainError" in err
    with pytest.raises(SystemExit):
        main(["eval-raina"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "raina_hh", "eval-raina", "--x", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and float(res.stdout) == 1.0
