import csv
import json
import math

import pytest

from iestim.cli import main

KARMED_DET = {"family": "karmed", "params": {"means": [1.0, 0.2, 0.4], "resolution": 4},
              "noise_mode": "deterministic"}


def _write(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_simulate_deterministic_karmed(tmp_path):
    out = tmp_path / "out"
    cfg = {"generator": KARMED_DET, "learner": "ls", "alpha": 1.0, "T": 50, "seeds": [0]}
    assert main(["simulate", "--config", _write(tmp_path, cfg), "--out", str(out), "--set", "dim_eps=0.25"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    d = summary["dissimilarity_dim"]
    assert summary["mean_regret"] == 0.0
    assert summary["regret_comparator"] == pytest.approx(1 + 12 * d**1.5)
    with open(out / "plot.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 50


def test_simulate_writes_one_transcript_per_seed(tmp_path):
    out = tmp_path / "out"
    cfg = {"generator": {"family": "karmed", "params": {"means": [0.8, 0.3], "resolution": 2}}, "T": 20}
    assert main(["simulate", "--config", _write(tmp_path, cfg), "--out", str(out), "--seeds", "0:20",
                 "--threads", "4"]) == 0
    assert len(list(out.glob("transcript_seed*.csv"))) == 20
    assert len(list(out.glob("transcript_seed*.json"))) == 20
    assert (out / "summary.json").exists()


def test_simulate_reproducible_across_thread_counts(tmp_path):
    cfg = {"generator": {"family": "sphere", "params": {"net_size": 8}}, "T": 30, "seeds": [1, 2, 3]}
    path = _write(tmp_path, cfg)
    main(["simulate", "--config", path, "--out", str(tmp_path / "a"), "--threads", "1"])
    main(["simulate", "--config", path, "--out", str(tmp_path / "b"), "--threads", "3"])
    for s in (1, 2, 3):
        name = f"transcript_seed{s}.csv"
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()


def test_simulate_unknown_alpha_needs_optimistic(tmp_path):
    cfg = {"generator": KARMED_DET, "alpha": "unknown", "learner": "ls"}
    assert main(["simulate", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 2
    cfg["learner"] = "optimistic"
    assert main(["simulate", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0


def test_dims_separation(tmp_path):
    cfg = {"generator": {"family": "separation", "params": {"N": 20, "eps": 0.25}}, "alpha": 1.0, "eps": 0.25}
    assert main(["dims", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "dims.json").read_text())
    assert rep["eluder"]["lower_bound"] >= 20 and rep["eluder"]["valid"]
    assert rep["dissimilarity"]["within_bound"]


def test_dims_singleton(tmp_path):
    cfg = {"generator": {"family": "table", "params": {"table": [[1.0]]}}, "eps": 0.5}
    assert main(["dims", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "dims.json").read_text())["dissimilarity"]["value"] == 1


def test_dims_size_cap(tmp_path):
    cfg = {"generator": {"family": "sphere", "params": {"net_size": 40}}, "eps": 0.5, "size_cap": 10}
    assert main(["dims", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 3


def test_bounds_prints_reports(tmp_path, capsys):
    assert main(["bounds", "--out", str(tmp_path), "--set", "d=4", "--set", "deterministic=true",
                 "--eps", "0.5"]) == 0
    rep = json.loads((tmp_path / "bounds.json").read_text())
    assert rep["regret_bound"]["value"] == pytest.approx(97.0)
    assert rep["pac_params"]["T_min"] == 34
    assert "regret_bound" in capsys.readouterr().out


def test_lowerbound_report(tmp_path):
    assert main(["lowerbound", "--out", str(tmp_path), "--N", "50", "--eps", "0.5", "--T", "25",
                 "--trials", "20", "--learner", "scan_baseline"]) == 0
    rep = json.loads((tmp_path / "lowerbound.json").read_text())
    assert rep["regret_comparator"] == pytest.approx(24 * 0.5 / (2 * math.e))
    expected = sum(min(k, 26) for k in range(1, 51)) / 50
    assert abs(rep["mean_t_opt"] - expected) < 6


def test_lowerbound_zero_trials(tmp_path):
    assert main(["lowerbound", "--out", str(tmp_path), "--trials", "0"]) == 2


def test_pac_deterministic(tmp_path):
    cfg = {"generator": KARMED_DET, "eps": 0.5, "delta": 0.1, "alpha": 1.0, "runs": 5}
    assert main(["pac", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "pac.json").read_text())
    assert rep["success_rate"] == 1.0


def test_pac_echoes_n1(tmp_path):
    cfg = {"generator": {"family": "karmed", "params": {"means": [0.9, 0.1], "resolution": 1}},
           "eps": 0.5, "delta": 0.5, "T": 30, "C": 5.0, "runs": 2}
    assert main(["pac", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "pac.json").read_text())["n1"] == 3


def test_pac_missing_eps(tmp_path):
    cfg = {"generator": KARMED_DET}
    assert main(["pac", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 2


def test_cover_command(tmp_path):
    cfg = {"generator": {"family": "sphere", "params": {"net_size": 8}}, "eps": 0.8, "mode": "exact"}
    assert main(["cover", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "cover.json").read_text())
    assert rep["exact"] and rep["size"] >= 1


def test_missing_generator_is_config_error(tmp_path):
    assert main(["simulate", "--out", str(tmp_path)]) == 2


def test_unreadable_config(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
