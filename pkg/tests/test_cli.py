import csv
import json
import subprocess
import sys

import pytest

from cauchysym.cli import ENV_OUTPUT, main, read_config
from cauchysym.experiments.reports import SAMPLE_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_single_triple(capsys):
    code, out, _ = run(capsys, "eval", "--z", "0,1,1j")
    rec = json.loads(out)
    assert code == 0
    assert rec["c_sq"] == pytest.approx(2.0, abs=1e-12)
    assert rec["re_part"] == pytest.approx(1.0, abs=1e-12)


def test_eval_curve_kernel_with_negative_abscissas(capsys):
    code, out, _ = run(capsys, "eval", "--kernel", "kgamma", "--curve", "parabola:0.5", "--xs", "-2,0,2")
    assert code == 0
    assert json.loads(out)["im_part"] == pytest.approx(0.025, abs=1e-12)


def test_eval_phase_kernel_reports_functionals(capsys):
    code, out, _ = run(capsys, "eval", "--kernel", "kh", "--phase", "0.3", "--z", "0,1,0.2+0.5j")
    rec = json.loads(out)
    assert code == 0 and abs(rec["r_h"]["formula"]) < 1e-12
    code, out, _ = run(capsys, "eval", "--kernel", "khstar", "--curve", "parabola:1", "--phase", "graph",
                       "--z", "0,1,0.2+0.5j")
    rec = json.loads(out)
    assert rec["h"]["formula"] == pytest.approx(rec["h"]["identity"], rel=1e-8)


def test_eval_batch_csv(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "eval", "--mode", "on-curve", "--kernel", "kgamma", "--curve", "cubic",
                       "--interval", "-1,1", "--n", "25", "--csv", str(path))
    assert code == 0
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == SAMPLE_COLUMNS and len(rows) == 26
    # every float is written round-trippable
    assert all(float(v) == float(repr(float(v))) for v in rows[1][:-1])


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_OUTPUT, str(tmp_path / "env"))
    code, _, _ = run(capsys, "eval", "--mode", "uniform-box", "--n", "5")
    assert code == 0 and (tmp_path / "env" / "eval.csv").exists()
    code, _, _ = run(capsys, "--output-dir", str(tmp_path / "flag"), "eval", "--mode", "uniform-box", "--n", "5")
    assert (tmp_path / "flag" / "eval.csv").exists()


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# worked example\nexample = 4.2\nlambda = 10   # large\n")
    assert read_config(cfg) == {"example": "4.2", "lambda": "10"}
    code, out, _ = run(capsys, "--config", str(cfg), "reproduce")
    assert code == 0 and "10.0" in out
    code, out, _ = run(capsys, "--config", str(cfg), "reproduce", "--lambda", "2")
    assert "0.02499999999" in out


def test_config_rejects_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "--config", str(cfg), "curves")
    assert code == 2 and "colour" in err


def test_verify_single_suite_writes_jsonl(capsys, tmp_path):
    report = tmp_path / "v.jsonl"
    code, out, _ = run(capsys, "verify", "--suite", "melnikov", "--n", "300", "--seed", "2",
                       "--report", str(report))
    assert code == 0 and out.startswith("PASS melnikov")
    lines = [json.loads(s) for s in report.read_text().splitlines()]
    assert lines[0]["suite"] == "melnikov" and lines[0]["config"]["sampler"]["count"] == 300


def test_verify_failure_exit_code(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "--suite", "example_42", "--tol", "spot=0", "--report",
                         str(tmp_path / "x.jsonl"))
    assert code == 1 and out.startswith("FAIL") and "failing assertion" in err


def test_verify_self_test(capsys):
    code, out, _ = run(capsys, "verify", "--self-test")
    assert code == 0 and "self-test: ok" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nope"],
    ["verify", "--n", "10"],
    ["verify", "--suite", "example_42", "--tol", "nonsense"],
    ["eval", "--kernel", "kgamma", "--curve", "cubic"],
    ["eval", "--kernel", "kh", "--z", "0,1,1j"],
    ["eval", "--z", "0,1"],
    ["reproduce"],
    ["extremal", "--budget", "0"],
    ["curves", "--curve", "circle"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_reproduce_examples(capsys):
    code, out, _ = run(capsys, "reproduce", "--example", "4.3")
    assert code == 0 and "direct = -1.19" in out
    code, out, _ = run(capsys, "reproduce", "--example", "4.1")
    assert code == 0 and len(out.splitlines()) == 5


def test_extremal(capsys, tmp_path):
    report = tmp_path / "e.jsonl"
    code, out, _ = run(capsys, "extremal", "--budget", "2000", "--region", "-2,2;-2,2;-2,2",
                       "--report", str(report))
    assert code == 0 and "2000" in out
    rec = json.loads(report.read_text().splitlines()[0])
    assert rec["evaluations"] <= 2000 and rec["region"] == [[-2, 2]] * 3


def test_curves(capsys):
    code, out, _ = run(capsys, "curves")
    assert "parabola:<a>" in out
    code, out, _ = run(capsys, "curves", "--curve", "parabola:1", "--at", "0,0.5")
    recs = [json.loads(s) for s in out.splitlines()]
    assert recs[0]["curvature"] == pytest.approx(2.0) and len(recs) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cauchysym", "curves"], capture_output=True, text=True)
    assert res.returncode == 0 and "cubic" in res.stdout
