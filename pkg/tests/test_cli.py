import json

import numpy as np
import pytest

import fscore as fs
from fscore.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_rate_subcommand(tmp_path, capsys):
    out = str(tmp_path / "rep")
    code, stdout, _ = run_cli(capsys, "rate", "--n-grid", "200,400",
                              "--reps", "3", "--seed", "1", "--out", out,
                              "--format", "csv")
    assert code == 0
    record = json.loads(stdout)
    assert len(record["rows"]) == 2
    assert (tmp_path / "rep" / "excess_rate.csv").exists()


def test_threshold_subcommand(tmp_path, capsys):
    code, stdout, _ = run_cli(capsys, "threshold", "--n-grid", "200,400",
                              "--reps", "3", "--seed", "1",
                              "--out", str(tmp_path), "--format", "json")
    assert code == 0
    assert json.loads(stdout)["kind"] == "threshold"


def test_config_file_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_grid": [100, 200], "reps": 2,
                               "estimator": {"method": "knn"}}))
    code, stdout, _ = run_cli(capsys, "rate", "--config", str(cfg),
                              "--reps", "3", "--out", str(tmp_path / "o"))
    assert code == 0
    record = json.loads(stdout)
    assert record["config"]["reps"] == 3  # flag wins over file
    assert record["config"]["estimator"]["method"] == "knn"


def test_dkw_subcommand(tmp_path, capsys):
    code, stdout, _ = run_cli(capsys, "dkw", "--n-values", "100",
                              "--t-values", "0.1", "--reps", "200",
                              "--seed", "0", "--out", str(tmp_path))
    assert code == 0
    rows = json.loads(stdout)["rows"]
    assert rows[0]["N"] == 100 and rows[0]["t"] == 0.1


def test_oracle_suite_subcommand(tmp_path, capsys):
    code, stdout, _ = run_cli(capsys, "oracle-suite", "--trials", "20",
                              "--seed", "0", "--out", str(tmp_path / "f"))
    assert code == 0
    assert json.loads(stdout)["ok"] is True


def test_train_predict_round_trip(tmp_path, capsys):
    fam = fs.make_smooth_1d_family()
    fs.sample(fam, 300, seed=1, labeled=True).to_csv(tmp_path / "lab.csv")
    fs.sample(fam, 400, seed=2, labeled=False).to_csv(tmp_path / "unl.csv")
    code, stdout, _ = run_cli(capsys, "train", "--labeled",
                              str(tmp_path / "lab.csv"), "--unlabeled",
                              str(tmp_path / "unl.csv"), "--out",
                              str(tmp_path / "model"))
    assert code == 0
    theta = json.loads(stdout)["theta_hat"]
    assert 0.0 <= theta <= 0.5
    code, stdout, _ = run_cli(capsys, "predict", "--model",
                              str(tmp_path / "model"), "--points",
                              str(tmp_path / "unl.csv"), "--out",
                              str(tmp_path / "preds.csv"))
    assert code == 0
    lines = (tmp_path / "preds.csv").read_text().strip().splitlines()
    assert lines[0] == "x_1,prediction"
    assert len(lines) == 401


def test_error_record_on_failure(tmp_path, capsys):
    code, _, stderr = run_cli(capsys, "rate", "--family", "bogus",
                              "--n-grid", "100,200", "--reps", "2",
                              "--out", str(tmp_path))
    assert code != 0
    record = json.loads(stderr)
    assert record["error"] == "ValueError"
    assert "bogus" in record["message"]


def test_same_seed_byte_identical(tmp_path, capsys):
    for name in ("r1", "r2"):
        code, _, _ = run_cli(capsys, "dkw", "--reps", "200", "--seed", "9",
                             "--out", str(tmp_path / name))
        assert code == 0
    a = (tmp_path / "r1" / "dkw.csv").read_bytes()
    b = (tmp_path / "r2" / "dkw.csv").read_bytes()
    assert a == b
