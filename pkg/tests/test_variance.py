import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import optimizer_minimum
from robustde.ingest import LogExpressionMatrix
from robustde.variance import (
    eb_shrink,
    estimate_variances,
    irls_group,
    pool_variances,
    shrinkage_weight,
)


def test_noiseless_block_gives_zero_variance():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(20, 1)) + rng.normal(size=(1, 5))
    res = irls_group(x)
    assert np.all(res.s2 <= 1e-20)


def test_single_gene_reduces_to_exact_fit():
    x = np.array([[1.0, 2.5, -0.3, 0.7]])
    res = irls_group(x)
    # offsets absorb every deviation, so the residual variance is zero
    assert res.s2[0] <= 1e-20


def test_too_few_samples():
    with pytest.raises(ValueError, match="cannot estimate within-group variance"):
        irls_group(np.ones((3, 1)))


def test_fixed_point_matches_optimizer():
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = rng.normal(size=(3, 3))
        res = irls_group(x)
        assert res.objective[-1] <= optimizer_minimum(x, rng) + 1e-6


@pytest.mark.parametrize("ddof", [1, 0])
def test_objective_never_increases(ddof):
    rng = np.random.default_rng(5)
    for m, ns in [(3, 3), (50, 4), (200, 6), (10, 2)]:
        x = rng.normal(size=(m, ns)) * rng.uniform(0.2, 2, size=(m, 1)) + rng.normal(size=(1, ns))
        obj = irls_group(x, ddof=ddof).objective
        assert np.all(np.diff(obj) <= 1e-9 * np.maximum(1, np.abs(obj[:-1])))


def test_converges_on_typical_block():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(500, 4)) * 0.5 + rng.normal(size=(1, 4))
    res = irls_group(x)
    assert res.converged and res.iterations <= 100


def test_pool_examples():
    np.testing.assert_allclose(pool_variances([[1.0, 3.0]], [4, 4]), [2.0])
    np.testing.assert_allclose(pool_variances(np.full((5, 3), 0.7), [2, 4, 3]), 0.7)


def test_pool_matches_scalar_loop_and_bounds():
    rng = np.random.default_rng(7)
    s2 = rng.uniform(0.01, 5, size=(100, 3))
    n = [2, 5, 3]
    out = pool_variances(s2, n)
    for i in range(100):
        ref = sum((n[s] - 1) * s2[i, s] for s in range(3)) / (sum(n) - 3)
        assert abs(out[i] - ref) <= 1e-12 * ref
    assert np.all(out >= s2.min(axis=1) - 1e-15)
    assert np.all(out <= s2.max(axis=1) + 1e-15)


def test_eb_equal_variances():
    sig, w = eb_shrink(np.full(6, 1.3), 8, 2)
    assert w == 1.0
    np.testing.assert_allclose(sig, 1.3)


def test_eb_three_gene_example():
    s2 = np.array([1.0, 2.0, 3.0])
    # n - S + 2 = 8 gives 2*2/8 * (1/3 + 4/2) = 7/6, clipped to 1
    assert shrinkage_weight(s2, 8, 2) == pytest.approx(7 / 6, rel=1e-14)
    sig, w = eb_shrink(s2, 8, 2)
    assert w == 1.0
    np.testing.assert_allclose(sig, 2.0)
    # n - S + 2 = 10 gives 14/15, inside [0, 1]
    sig, w = eb_shrink(s2, 10, 2)
    assert w == pytest.approx(14 / 15, rel=1e-14)
    np.testing.assert_allclose(sig, (1 - 14 / 15) * s2 + 14 / 15 * 2.0, rtol=1e-14)


def test_eb_wide_spread_barely_shrinks():
    # 1% of genes a thousand times noisier than the rest
    s2 = np.ones(20000)
    s2[::100] = 1000.0
    # the 1/m term alone contributes about 2 / (n - S + 2), so n must be large
    sig, w = eb_shrink(s2, 400, 2)
    s_bar = s2.mean()
    ref = 2 * (s2.size - 1) / 400 * (1 / s2.size + s_bar**2 / np.sum((s2 - s_bar) ** 2))
    assert w == pytest.approx(ref, rel=1e-12)
    assert w < 0.01
    assert eb_shrink(s2, 8, 2)[1] > 0.25
    np.testing.assert_allclose(sig, (1 - w) * s2 + w * s_bar, rtol=1e-12)


def test_eb_preserves_mean():
    rng = np.random.default_rng(9)
    s2 = rng.gamma(2.0, 0.5, size=2000)
    sig, w = eb_shrink(s2, 8, 2)
    assert 0 < w < 1
    assert sig.mean() == pytest.approx(s2.mean(), rel=1e-12)


def _logexp(values, groups):
    return LogExpressionMatrix(values, np.asarray(groups), "counts", 1.0,
                               [f"g{i}" for i in range(values.shape[0])],
                               [f"s{j}" for j in range(values.shape[1])])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2.0, 0.5, 3.7]))
def test_scale_equivariance(seed, k):
    rng = np.random.default_rng(seed)
    groups = np.repeat([1, 2], 4)
    x = rng.normal(size=(60, 8)) * rng.uniform(0.3, 1.5, size=(60, 1)) + rng.normal(size=(1, 8))
    a = estimate_variances(_logexp(x, groups))
    b = estimate_variances(_logexp(k * x, groups))
    np.testing.assert_allclose(b.s2_group, k**2 * a.s2_group, rtol=1e-6, atol=1e-18)
    np.testing.assert_allclose(b.s2_pooled, k**2 * a.s2_pooled, rtol=1e-6, atol=1e-18)
    np.testing.assert_allclose(b.sigma2_hat, k**2 * a.sigma2_hat, rtol=1e-6, atol=1e-18)
    assert abs(b.w - a.w) <= 1e-6
