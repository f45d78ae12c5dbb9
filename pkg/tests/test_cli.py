import csv
import json
import math

import numpy as np
import pytest

from shiftspline.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1")
    assert code == 0
    d = json.loads(out)
    assert d["gamma_n"] == 12 and d["moment_case"]["case"] == "b"
    assert d["readable"]["delta0"] == "4.6655e-24"
    assert "l_const = 1.0" in d["notes"][0]


def test_floats_have_17_digits(capsys):
    _, out, _ = run(capsys, "constants", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1")
    assert '"alpha_n": 3.1415926535897931' in out


def test_bound_violation_exit_code(capsys):
    code, _, err = run(capsys, "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1",
                       "--delta", "0.1", "--fnorm", "1")
    assert code == 2 and "delta0" in err


def test_bound_forced(capsys):
    code, out, _ = run(capsys, "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1",
                       "--fill", "0.1", "--fnorm", "2", "--force-hypothesis")
    d = json.loads(out)
    assert code == 0 and d["forced"] and not d["hypothesis_ok"]
    assert d["bound"] == pytest.approx(2 * 1.1456297375142057)


def test_bound_zero_norm(capsys):
    code, out, _ = run(capsys, "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1",
                       "--delta", "1e-30", "--fnorm", "0")
    assert code == 0 and json.loads(out)["ln_bound"] == -math.inf


def test_interpolate(tmp_path, capsys):
    pts = np.array([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5], [0.2, 0.7]])
    vals = 1 + 2 * pts[:, 0] - pts[:, 1]
    (tmp_path / "p.csv").write_text("x1,x2\n" + "\n".join(f"{a},{b}" for a, b in pts) + "\n")
    (tmp_path / "v.csv").write_text("value\n" + "\n".join(map(str, vals)) + "\n")
    (tmp_path / "e.csv").write_text("x1,x2\n0.3,0.3\n0.9,0.1\n")
    code, _, _ = run(capsys, "interpolate", "--points", str(tmp_path / "p.csv"),
                     "--values", str(tmp_path / "v.csv"), "--n", "2", "--lambda", "2",
                     "--c", "1", "--eval", str(tmp_path / "e.csv"), "--out", str(tmp_path / "o.csv"))
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "o.csv")))
    assert list(rows[0]) == ["x1", "x2", "s"]
    assert float(rows[0]["s"]) == pytest.approx(1.3, abs=1e-8)
    assert float(rows[1]["s"]) == pytest.approx(2.7, abs=1e-8)


def test_convergence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "lambda": 2, "c": 0.1, "levels": 3,
                               "target": {"kind": "gaussian"}}))
    code, _, _ = run(capsys, "convergence", "--config", str(cfg), "--out", str(tmp_path / "r.json"))
    assert code == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert len(rep["levels"]) == 3
    lines = (tmp_path / "levels.csv").read_text().splitlines()
    assert lines[0] == "delta,N,fill_upper,max_error,condition" and len(lines) == 4


def test_verify_lemma23(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma23")
    assert code == 0 and json.loads(out)["pass"]


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "shiftspline", "verify", "--suite", "lemma23"],
                         capture_output=True, text=True)
    assert out.returncode == 0
