import json
import subprocess
import sys

import pytest

from driftbench.cli import dispatch

TINY = ["--n-train", "300", "--n-test", "300", "--n-region", "100"]


def test_list(capsys):
    assert dispatch(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = lines[1:]
    assert len(rows) == 18
    assert rows[0].startswith("Exp1.1") and rows[-1].startswith("Exp2.6")
    assert "45 deg" in rows[10]


def test_surface_exp11(capsys):
    assert dispatch(["surface", "--exp", "Exp1.1"]) == 0
    out = capsys.readouterr().out
    assert "S: x - 3/2 = 0" in out and "AxisParallelPlane" in out


def test_surface_json(capsys):
    assert dispatch(["surface", "--exp", "1.9", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["id"] == "Exp1.9" and doc["taxonomy"] == "ShiftedCylinder"


def test_surface_rejects_4d(capsys):
    assert dispatch(["surface", "--exp", "Exp2.1"]) == 2


def test_unknown_experiment_lists_valid(capsys):
    assert dispatch(["run", "--exp", "Exp7.7"]) == 2
    err = capsys.readouterr().err
    assert "Exp1.1" in err and "Exp2.6" in err


def test_unknown_model(capsys):
    assert dispatch(["run", "--exp", "Exp1.1", "--models", "xgb"]) == 2
    assert "SVM, LR, RF, GNB, KNN" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert dispatch(["frobnicate"]) == 2
    assert dispatch([]) == 2
    assert dispatch(["run", "--reps", "0"]) == 2
    assert dispatch(["run", "--n-train", "50"]) == 2
    assert dispatch(["run", "--format", "both"]) == 2


def test_verify(capsys):
    assert dispatch(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_run_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["-q", "run", "--exp", "Exp1.1", "--models", "rf", "--seed", "42", *TINY]
    assert dispatch([*args, "--out", str(a)]) == 0
    assert dispatch([*args, "--out", str(b)]) == 0
    strip = lambda p: [line for line in p.read_text().splitlines() if '"timestamp"' not in line]
    assert strip(a) == strip(b)
    doc = json.loads(a.read_text())
    assert doc["meta"]["seed"] == 42 and doc["meta"]["timestamp"]
    assert [c["model"] for c in doc["experiments"][0]["overall"]] == ["RF"]


def test_stdout_and_csv(tmp_path, capsys):
    assert dispatch(["-q", "run", "--exp", "Exp1.2", "--models", "gnb,lr", *TINY, "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("experiment,model,same_acc") and len(out) == 3
    assert dispatch(["-q", "run", "--exp", "Exp1.2", "--models", "gnb", *TINY, "--format", "both",
                     "--out", str(tmp_path / "rep.json")]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["rep.csv", "rep.json", "rep_quartiles.csv", "rep_regions.csv"]
    quart = (tmp_path / "rep_quartiles.csv").read_text().splitlines()
    assert len(quart) == 1 + 4


def test_config_file_and_env_seed(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiments": ["Exp1.3"], "models": ["GNB"], "n_train": 300,
                               "n_test": 300, "n_region": 100}))
    monkeypatch.setenv("DRIFTBENCH_SEED", "99")
    assert dispatch(["-q", "run", "--config", str(cfg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed"] == 99 and doc["experiments"][0]["id"] == "Exp1.3"
    # flags override the file and the environment
    assert dispatch(["-q", "run", "--config", str(cfg), "--seed", "5", "--models", "lr"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed"] == 5 and doc["experiments"][0]["overall"][0]["model"] == "LR"


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert dispatch(["run", "--config", str(cfg)]) == 2
    assert dispatch(["run", "--config", str(tmp_path / "missing.json")]) == 2


def test_progress_goes_to_stderr(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "driftbench.cli", "run", "--exp", "Exp1.1", "--models", "gnb", *TINY,
         "--out", str(out)],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout == "" and "finished" in proc.stderr
    assert json.loads(out.read_text())["experiments"][0]["id"] == "Exp1.1"


@pytest.mark.parametrize("flag", ["--version", "--help"])
def test_info_flags(flag, capsys):
    assert dispatch([flag]) == 0
