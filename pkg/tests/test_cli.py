import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy.stats import norm

from robustde.cli import main
from robustde.fitter import figure_inputs, two_group_offset


@pytest.fixture(scope="module")
def simdir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim")
    assert main(["simulate", "--preset", "figure3a", "--seed", "1", "-o", str(out)]) == 0
    return out


def _fit(simdir, tmp_path, *extra):
    out = tmp_path / "fit.json"
    code = main(["fit", str(simdir / "counts.tsv"), "--groups", str(simdir / "groups.tsv"),
                 "--lengths", str(simdir / "lengths.tsv"), "-o", str(out), *extra])
    assert code == 0
    return json.loads(out.read_text())


def test_units_tpm_columns(simdir, tmp_path, capsys):
    out = tmp_path / "tpm.tsv"
    assert main(["units", str(simdir / "counts.tsv"), "--unit", "tpm",
                 "--lengths", str(simdir / "lengths.tsv"), "-o", str(out)]) == 0
    assert capsys.readouterr().out.count("\n") == 1
    data = np.loadtxt(out, skiprows=1, usecols=range(1, 9))
    np.testing.assert_allclose(data.sum(axis=0), 1e6, rtol=1e-9)


def test_units_missing_lengths(simdir, tmp_path, capsys):
    code = main(["units", str(simdir / "counts.tsv"), "--unit", "rpkm", "-o", str(tmp_path / "x.tsv")])
    assert code == 2
    assert "lengths" in capsys.readouterr().err


def test_fit_matches_preset_truth(simdir, tmp_path):
    data = _fit(simdir, tmp_path)
    tau = np.array(data["tau"])
    with open(simdir / "truth.tsv", newline="") as fh:
        truth = list(csv.DictReader(fh, delimiter="\t"))
    is_de = np.array([r["is_de"] == "1" for r in truth])
    gamma = np.array([float(r["gamma_true"]) for r in truth])
    assert is_de.sum() == 300
    # many N(0, 1) shifts sit below the threshold, so expect the power-limited count:
    # call when |gamma + noise| >= lambda, noise ~ N(0, sigma2 (1/4 + 1/4))
    lam = np.array(data["lambda"])
    sd = np.sqrt(np.array(data["sigma2_hat"]) / 2)
    p_call = norm.sf((lam - gamma) / sd) + norm.cdf((-lam - gamma) / sd)
    expected = p_call.sum()
    assert abs(tau.sum() - expected) <= 0.1 * expected
    assert tau[~is_de].sum() <= 0.05 * tau.sum()


def test_cpm_roundtrip_gives_same_calls(simdir, tmp_path):
    cpm = tmp_path / "cpm.tsv"
    assert main(["units", str(simdir / "counts.tsv"), "--unit", "cpm", "--pseudocount", "1",
                 "-o", str(cpm)]) == 0
    via_cpm = tmp_path / "cpm_fit.json"
    assert main(["fit", str(cpm), "--groups", str(simdir / "groups.tsv"), "--pseudocount", "0",
                 "-o", str(via_cpm)]) == 0
    direct = _fit(simdir, tmp_path)
    assert json.loads(via_cpm.read_text())["tau"] == direct["tau"]


def test_q_monotone(simdir, tmp_path):
    loose = sum(_fit(simdir, tmp_path, "--q", "0.5")["tau"])
    strict = sum(_fit(simdir, tmp_path, "--q", "0.001")["tau"])
    assert strict <= loose


def test_gamma_csv(simdir, tmp_path):
    gpath = tmp_path / "gamma.csv"
    _fit(simdir, tmp_path, "--gamma-csv", str(gpath))
    with open(gpath, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["gene_id", "gamma_2", "mu", "tau", "score"]
    assert len(rows) == 1001


def test_malformed_row(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("gene_id\ta\tb\nx\t1\t2\ny\t3\n")
    groups = tmp_path / "g.tsv"
    groups.write_text("a\t1\nb\t2\n")
    assert main(["fit", str(bad), "--groups", str(groups), "-o", str(tmp_path / "f.json")]) == 2
    assert "line 3" in capsys.readouterr().err


def test_simulate_deterministic_and_unknown(tmp_path):
    for d in ("a", "b"):
        assert main(["simulate", "--preset", "table2_7070", "--seed", "4", "-o", str(tmp_path / d)]) == 0
    for name in ("counts.tsv", "truth.tsv", "scenario.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert main(["simulate", "--preset", "figure9", "-o", str(tmp_path / "c")]) != 0


def test_simulate_from_scenario_json(simdir, tmp_path):
    assert main(["simulate", "--scenario", str(simdir / "scenario.json"), "-o", str(tmp_path)]) == 0
    assert (tmp_path / "counts.tsv").read_bytes() == (simdir / "counts.tsv").read_bytes()


def test_bench(tmp_path):
    out = tmp_path / "bench.csv"
    roc = tmp_path / "roc.csv"
    args = ["bench", "--preset", "table1_3050", "--seed", "2", "--replicates", "3", "-o", str(out),
            "--roc-csv", str(roc)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    assert roc.read_text().startswith("fpr,tpr\n")
    assert main(["bench", "--preset", "table1_3050", "--methods", "voom", "-o", str(out)]) == 1


def test_landscape_figure_argmin(tmp_path):
    out = tmp_path / "land.csv"
    assert main(["landscape", "--figure", "fig1a", "--grid=-3:3:6001", "-o", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    grid = [r for r in rows if r["kind"] == "grid"]
    best = min(grid, key=lambda r: float(r["G"]))
    (mrow,) = [r for r in rows if r["kind"] == "min"]
    kw = figure_inputs("fig1a")
    delta = kw["mu_prime"][:, 1] - kw["mu_prime"][:, 0]
    d, _ = two_group_offset(delta, kw["sigma2"], np.full(100, kw["lam"]))
    assert float(mrow["d"]) == d
    assert abs(float(best["d"]) - d) <= 6 / 6000


def test_landscape_empty_grid_and_parabola(tmp_path):
    out = tmp_path / "land.csv"
    assert main(["landscape", "--figure", "fig1b", "--grid", "1:0:10", "-o", str(out)]) == 1
    assert main(["landscape", "--figure", "fig1b", "--grid", "0:1:0", "-o", str(out)]) == 1
    assert main(["landscape", "--figure", "fig1b", "--no-threshold", "--num", "51", "-o", str(out)]) == 0
    with open(out, newline="") as fh:
        g = np.array([float(r["G"]) for r in csv.DictReader(fh) if r["kind"] == "grid"])
    second = np.diff(g, 2)
    np.testing.assert_allclose(second, second[0], rtol=1e-6)


def test_landscape_three_groups(tmp_path):
    out = tmp_path / "surf.csv"
    assert main(["landscape", "--figure", "fig2b", "--num", "21", "-o", str(out)]) == 0
    header = out.read_text().splitlines()[0]
    assert header == "kind,d2,d3,G"


def test_usage_errors_exit_one():
    proc = subprocess.run([sys.executable, "-m", "robustde", "fit"], capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "robustde"], capture_output=True, text=True)
    assert proc.returncode == 1
