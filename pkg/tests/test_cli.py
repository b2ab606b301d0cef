import io
import json
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from conftest import alternating_sequence, reciprocal_sequence
from hausdorff_hyperspace import PointSet, save_cloud, write_sequence
from hausdorff_hyperspace.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema"] == 1
    return doc


@pytest.fixture
def reciprocal_dir(tmp_path):
    return write_sequence(list(reciprocal_sequence(200)), tmp_path / "reciprocal")


@pytest.fixture
def clouds(tmp_path, rng):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    save_cloud(PointSet(rng.normal(size=(80, 2))), a)
    save_cloud(PointSet(rng.normal(size=(60, 2)) + 0.5), b)
    return a, b


def test_dist(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("0\n")
    b.write_text("0\n1\n")
    doc = run_json("dist", a, b)
    assert (doc["u_ab"], doc["u_ba"], doc["rho_h"]) == (0.0, 1.0, 1.0)


@pytest.mark.parametrize("metric", ["euclidean", "manhattan", "chebyshev"])
def test_dist_oracle_agrees(clouds, metric):
    fast = run_json("dist", *clouds, "--metric", metric)
    slow = run_json("dist", *clouds, "--metric", metric, "--oracle")
    fast.pop("oracle"), slow.pop("oracle")
    assert fast == slow


def test_cauchy(reciprocal_dir):
    doc = run_json("cauchy", reciprocal_dir, "--epsilon", "0.1")
    assert doc["is_cauchy"] and doc["m_star"] == 9  # 1/10 - 1/200 < 0.1 <= 1/9 - 1/200


def test_limit_recovers_origin(reciprocal_dir, tmp_path):
    cand = tmp_path / "cand.csv"
    cand.write_text("0\n0.05\n0.1\n")
    doc = run_json("limit", reciprocal_dir, "--epsilon", "0.02", "--candidates", cand)
    assert doc["limit"]["points"] == [[0.0]]
    assert doc["trace"][0] == {"n": 1, "u_limit_to_set": 1.0, "u_set_to_limit": 1.0, "rho_h": 1.0}
    grid = run_json("limit", reciprocal_dir, "--epsilon", "0.02", "--grid", "0.01")
    assert grid["limit"]["points"] == [[0.0]]


def test_lemma(reciprocal_dir, tmp_path):
    cand = tmp_path / "cand.csv"
    cand.write_text("0\n")
    doc = run_json("lemma", reciprocal_dir, "--epsilon", "1", "--m", "0", "--x", "1",
                   "--candidates", cand, "--limit-epsilon", "0.02", "--b", "2")
    assert doc["verdict"]["holds"] and doc["verdict"]["distance"] == 1.0
    assert doc["chain"]["indices"][:3] == [2, 4, 8]


def test_lemma_hypothesis_violation_exit_code(reciprocal_dir):
    code, _, err = run("lemma", reciprocal_dir, "--epsilon", "1", "--m", "0", "--x", "2")
    assert code == 3 and "index 1" in err


def test_liminf_limsup_agree(tmp_path):
    path = write_sequence(list(alternating_sequence(40)), tmp_path / "alt")
    code, _, _ = run("liminf", path, "--epsilon", "0.1")
    assert code == 3
    hi = run_json("limsup", path, "--epsilon", "0.1")
    assert hi["points"] == [[0.0], [5.0], [6.0]]
    rec = run_json("agree", path, "--epsilon", "0.1")
    assert rec["liminf"] is None and rec["upper_limit_identity"] and not rec["agree"]


def test_ifs(tmp_path):
    seed = tmp_path / "seed.csv"
    seed.write_text("0\n1\n")
    out, trace = tmp_path / "out.csv", tmp_path / "trace.csv"
    doc = run_json("ifs", "builtin:cantor", "--seed", seed, "--iters", "5", "--budget", "1000",
                   "--out", out, "--trace", trace)
    assert doc["final_size"] == 64
    assert np.allclose([s["gap"] for s in doc["steps"]], [3.0 ** -(n + 1) for n in range(5)])
    assert trace.read_text().splitlines()[0].startswith("step,size,gap")
    assert len(out.read_text().splitlines()) == 64


def test_exit_codes(tmp_path, clouds):
    assert run("dist", clouds[0])[0] == 1                      # missing argument
    assert run("dist", *clouds, "--metric", "l3")[0] == 1      # unknown metric
    assert run("dist", clouds[0], tmp_path / "missing.csv")[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    code, _, err = run("dist", clouds[0], bad)
    assert code == 2 and "bad.csv:2:" in err
    assert run("ifs", "builtin:cantor", "--seed", clouds[0], "--iters", "2", "--budget", "10")[0] == 2


def test_output_is_deterministic(reciprocal_dir, clouds):
    for argv in (("dist", *clouds), ("limit", reciprocal_dir, "--epsilon", "0.05"),
                 ("agree", reciprocal_dir, "--epsilon", "0.05")):
        assert run(*argv)[1] == run(*argv)[1]
