import json
import math

import numpy as np
import pytest

from robustde.simulate import (
    PRESETS,
    SimScenario,
    make_rng,
    negative_binomial,
    preset,
    replicate_seeds,
    simulate,
)


@pytest.fixture(scope="module")
def fig3a():
    return simulate(preset("figure3a", seed=3))


def test_column_sums_and_floor(fig3a):
    counts = fig3a.counts.counts
    np.testing.assert_array_equal(counts.sum(axis=0), fig3a.extras["depth"] + counts.shape[0])
    assert counts.min() >= 1


def test_preset_settings():
    a = PRESETS["figure3a"]
    assert (a.m, round(a.de_fraction * a.m), a.shift_mean) == (1000, 300, 0.0)
    d = PRESETS["figure3d"]
    assert (round(d.de_fraction * d.m), d.shift_mean) == (900, 3.0)
    t = PRESETS["table1_7090"]
    assert (t.kind, t.de_fraction, t.up_fraction, t.n_per_group) == ("lognormal32", 0.7, 0.9, (4, 4))
    assert t.shift_mean == pytest.approx(math.log(3))
    assert PRESETS["table2_3050"].kind == "negbinomial32"
    assert len(PRESETS) == 16
    with pytest.raises(ValueError, match="unknown preset"):
        preset("table3_3050")


def test_truth_layout(fig3a):
    assert fig3a.n_de == 300 and fig3a.is_de.sum() == 300
    assert np.all(fig3a.gamma_true[~fig3a.is_de] == 0.0)


def test_same_seed_identical_files(tmp_path):
    for name in ("figure3b", "table2_7050"):
        a = simulate(preset(name, seed=9)).write(tmp_path / "a")
        b = simulate(preset(name, seed=9)).write(tmp_path / "b")
        for key in a:
            assert a[key].read_bytes() == b[key].read_bytes()
    other = simulate(preset("figure3b", seed=10)).counts.counts
    assert not np.array_equal(other, simulate(preset("figure3b", seed=9)).counts.counts)


def test_written_files(tmp_path):
    sim = simulate(preset("table1_3050", seed=2))
    paths = sim.write(tmp_path, prefix="rep_")
    lines = paths["truth"].read_text().splitlines()
    assert lines[0] == "gene_id\tis_de\tgamma_true"
    assert len(lines) == 1001
    meta = json.loads(paths["scenario"].read_text())
    assert SimScenario.from_dict(meta["scenario"]) == sim.scenario


def test_within_group_differences_track_offsets(fig3a):
    logc = np.log(fig3a.counts.counts)
    D = fig3a.d_true
    groups = fig3a.counts.group_of_sample
    high = fig3a.counts.counts.min(axis=1) >= 20  # Poisson noise small enough to see offsets
    for s in (1, 2):
        cols = np.flatnonzero(groups == s)
        for j in cols[1:]:
            diff = logc[high, j] - logc[high, cols[0]]
            assert abs(np.median(diff) - (D[j] - D[cols[0]])) < 0.1


@pytest.mark.parametrize("name", ["table1_3050", "table1_7090", "table2_3070"])
def test_benchmark_de_fraction_and_fold_law(name):
    sc = preset(name, seed=4)
    sim = simulate(sc)
    n_de = round(sc.de_fraction * sc.m)
    assert sim.is_de.sum() == n_de
    direction = sim.extras["direction"]
    assert (direction == 1).sum() == round(sc.up_fraction * n_de)
    assert np.all((direction != 0) == sim.is_de)
    # undoing the direction recovers the N(log 3, 1) magnitudes
    magnitude = (direction * sim.gamma_true)[sim.is_de]
    assert abs(magnitude.mean() - math.log(3)) <= 3 / math.sqrt(n_de)


def test_lognormal_residual_sd():
    sim = simulate(preset("table1_3050", seed=5))
    groups = sim.counts.group_of_sample
    mu = np.column_stack([sim.mu_1, sim.mu_2])[:, groups - 1]
    log_mean = mu + np.log(sim.counts.gene_lengths)[:, None] + sim.d_true[None, :]
    high = log_mean.min(axis=1) > math.log(200)  # rounding to integers negligible
    resid = np.log(sim.counts.counts[high]) - log_mean[high]
    assert high.sum() > 50
    assert abs(resid.std() - 0.5) <= 0.05


def test_negative_binomial_moments():
    rng = make_rng(12)
    mean, phi = 10.0, 0.5
    draws = negative_binomial(rng, np.full(100000, mean), phi)
    assert abs(draws.var() / (mean + phi * mean**2) - 1) <= 0.05
    with pytest.raises(ValueError):
        negative_binomial(rng, [1.0], 0.0)


def test_generator_moments():
    rng = make_rng(13)
    z = rng.normal(0, 1, size=100000)
    assert abs(z.mean()) <= 0.02 and abs(z.var() - 1) <= 0.02
    assert rng.multinomial(12345, [0.2, 0.3, 0.5]).sum() == 12345


def test_replicate_seeds():
    a = replicate_seeds(7, 5)
    assert a == replicate_seeds(7, 5)
    assert len(set(a)) == 5 and a != replicate_seeds(8, 5)


def test_invalid_scenarios():
    with pytest.raises(ValueError):
        SimScenario(de_fraction=1.5)
    with pytest.raises(ValueError):
        SimScenario(kind="poisson")
    with pytest.raises(ValueError):
        SimScenario.from_dict({"m": 10, "bogus": 1})


def test_de_count_rounds_to_nearest():
    sim = simulate(SimScenario(m=15, de_fraction=0.3, seed=1))
    assert sim.n_de == 5  # 4.5 rounds up
