import csv
import json
import math

import numpy as np
import pytest

from bifurcate.cli import main
from bifurcate.graph import TemporalSequence
from bifurcate.io import write_edgelist
from bifurcate.synthgen import ScenarioConfig, erdos_renyi, scenario

from conftest import complete, path


def read_csv(p):
    with open(p) as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def small_pair(tmp_path):
    a, b = scenario(ScenarioConfig(n=80, T=5, t0=3, p_edge=0.08, seed=2))
    fa, fb = tmp_path / "a.txt", tmp_path / "b.txt"
    write_edgelist(a, fa)
    write_edgelist(b, fb)
    return fa, fb


def test_generate_writes_edgelists(tmp_path):
    assert main(["generate", "--n", "50", "--steps", "4", "--t0", "3", "--p-edge", "0.1", "--out", str(tmp_path)]) == 0
    head = (tmp_path / "normal.txt").read_text().splitlines()[0]
    assert head == "# nodes=50 steps=4"
    assert (tmp_path / "abnormal.txt").exists()


def test_features_single_step(tmp_path):
    f = tmp_path / "k3.txt"
    write_edgelist(TemporalSequence((complete(3),)), f)
    out = tmp_path / "out"
    assert main(["features", "--input", str(f), "--out", str(out), "--dim", "2", "--no-plots"]) == 0
    rows = read_csv(out / "features_t1.csv")
    assert len(rows) == 3 and list(rows[0]) == ["deg", "eig", "lfvc", "clos", "betw", "lcc", "hop2", "hop3"]
    emb = read_csv(out / "embedding.csv")
    assert list(emb[0]) == ["t", "node", "y1", "y2"]


def test_features_two_steps(tmp_path):
    f = tmp_path / "s.txt"
    write_edgelist(TemporalSequence((complete(4), path(4))), f)
    out = tmp_path / "out"
    assert main(["features", "--input", str(f), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.glob("features_t*.csv")) == ["features_t1.csv", "features_t2.csv"]
    assert len(read_csv(out / "embedding.csv")) == 8
    assert (out / "embedding.png").stat().st_size > 0


def test_malformed_line_reports_line_number(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("# nodes=3 steps=1\n1 0 1\n1 0 x\n")
    assert main(["features", "--input", str(f), "--out", str(tmp_path / "o")]) != 0
    err = capsys.readouterr().err
    assert err.startswith("error:") and ":3:" in err and len(err.strip().splitlines()) == 1


def test_entropy_identical_snapshots_zero_z(tmp_path):
    f = tmp_path / "s.txt"
    write_edgelist(TemporalSequence((complete(4),) * 3), f)
    assert main(["entropy", "--input", str(f), "--out", str(tmp_path), "--no-plots"]) == 0
    rows = read_csv(tmp_path / "entropy.csv")
    assert all(float(r["zV"]) == 0 and float(r["zQ"]) == 0 for r in rows)


def test_entropy_alternating(tmp_path):
    f = tmp_path / "s.txt"
    write_edgelist(TemporalSequence((complete(3), path(3), complete(3), path(3))), f)
    assert main(["entropy", "--input", str(f), "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "entropy.csv")
    V = [float(r["V"]) for r in rows]
    np.testing.assert_allclose(V, [math.log(2), 0.562335, math.log(2), 0.562335], atol=1e-6)
    assert list(rows[0]) == ["t", "V", "Q", "lower", "upper", "zV", "zQ"]
    assert float(rows[1]["lower"]) <= V[1] <= float(rows[1]["upper"])
    assert (tmp_path / "entropy.png").exists()


def test_entropy_approx_counter_large(tmp_path, capsys):
    f = tmp_path / "big.txt"
    write_edgelist(TemporalSequence((erdos_renyi(3000, 0.01, 0),)), f)
    assert main(["entropy", "--input", str(f), "--mode", "approx", "-v", "--out", str(tmp_path), "--no-plots"]) == 0
    assert "eigendecompositions: 0" in capsys.readouterr().out
    row = read_csv(tmp_path / "entropy.csv")[0]
    assert row["V"] == "" and float(row["Q"]) > 0.99


def test_detect_identical_inputs(tmp_path, small_pair):
    fa, _ = small_pair
    out = tmp_path / "det"
    assert main(["detect", "--input", str(fa), "--input-b", str(fa), "--out", str(out), "--no-plots"]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["critical_time"] is None
    assert all(p == 1.0 for p in rep["p_values"])


def test_detect_outputs(tmp_path, small_pair):
    fa, fb = small_pair
    out = tmp_path / "det"
    assert main(["detect", "--input", str(fa), "--input-b", str(fb), "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["critical_time"] == 3
    rows = read_csv(out / "report.csv")
    assert list(rows[0]) == ["t", "T2", "F", "p", "zV_A", "zV_B", "zQ_A", "zQ_B"]
    ells = json.loads((out / "ellipsoids_b.json").read_text())
    assert [e["t"] for e in ells] == [1, 2, 3, 4, 5]
    P = np.array(ells[0]["P"])
    assert ells[0]["volume_proxy"] == pytest.approx(np.linalg.det(P) ** -0.5, rel=1e-9)
    for name in ("pvalues.png", "trajectory.png", "entropy.png", "trajectory.csv", "embedding.csv"):
        assert (out / name).stat().st_size > 0


def test_detect_shape_mismatch(tmp_path, small_pair, capsys):
    fa, _ = small_pair
    other = tmp_path / "o.txt"
    write_edgelist(TemporalSequence((complete(3),)), other)
    assert main(["detect", "--input", str(fa), "--input-b", str(other), "--out", str(tmp_path)]) == 1
    assert "shape mismatch" in capsys.readouterr().err


def test_detect_threads_do_not_change_numbers(tmp_path, small_pair):
    fa, fb = small_pair
    for k in (1, 3):
        assert main(["detect", "--input", str(fa), "--input-b", str(fb), "--threads", str(k), "--out", str(tmp_path / f"t{k}"), "--no-plots"]) == 0
    assert (tmp_path / "t1" / "report.json").read_text() == (tmp_path / "t3" / "report.json").read_text()


def test_config_file_and_flag_precedence(tmp_path, small_pair):
    fa, fb = small_pair
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input": str(fa), "input_b": str(fb), "dim": 2, "p-threshold": 1e-300, "no_plots": True}))
    out = tmp_path / "c1"
    assert main(["detect", "--config", str(cfg), "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["threshold"] == 1e-300
    assert len(read_csv(out / "trajectory.csv")[0]) == 4  # seq, t, c1, c2
    out2 = tmp_path / "c2"
    assert main(["detect", "--config", str(cfg), "--p-threshold", "0.05", "--out", str(out2)]) == 0
    assert json.loads((out2 / "report.json").read_text())["threshold"] == 0.05


def test_bench_schema(tmp_path):
    assert main(["bench", "--sizes", "100,200", "--trials", "1", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "bench.csv")
    assert list(rows[0]) == ["n", "t_exact", "t_approx", "ratio"] and len(rows) == 2
    assert (tmp_path / "bench.png").exists()
    assert main(["bench", "--sizes", "50", "--out", str(tmp_path)]) == 1


def test_missing_input_is_error(capsys):
    assert main(["entropy"]) == 1
    assert "needs --input" in capsys.readouterr().err
