"""Student t and F quantiles by inverting the regularized incomplete beta function."""

import math

from scipy.optimize import brentq
from scipy.special import betainc

_RTOL = 4 * 2.220446049250313e-16


def _check(p, *dfs):
    if not 0 < p < 1 or math.isnan(p):
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    for df in dfs:
        if not df >= 1 or math.isinf(df):
            raise ValueError(f"degrees of freedom must be finite and >= 1, got {df}")


def _invert_beta(a, b, target):
    """Solve ``I_z(a, b) = target`` for z, working in the smaller tail.

    Returns ``(z, 1 - z)`` with whichever side is small computed directly.
    """
    if target <= 0.5:
        z = brentq(lambda z: betainc(a, b, z) - target, 0.0, 1.0, xtol=1e-300, rtol=_RTOL, maxiter=500)
        return z, 1.0 - z
    # I_z(a, b) = 1 - I_{1-z}(b, a)
    y = brentq(lambda y: betainc(b, a, y) - (1.0 - target), 0.0, 1.0, xtol=1e-300, rtol=_RTOL, maxiter=500)
    return 1.0 - y, y


def t_quantile(p, df):
    """Inverse CDF of Student's t with ``df`` degrees of freedom."""
    _check(p, df)
    if p == 0.5:
        return 0.0
    tail = p if p < 0.5 else 1.0 - p
    # P(|T| > t) = I_z(df/2, 1/2) with z = df / (df + t^2)
    z, one_minus_z = _invert_beta(df / 2.0, 0.5, 2.0 * tail)
    t = math.sqrt(df * one_minus_z / z)
    return -t if p < 0.5 else t


def f_quantile(p, df1, df2):
    """Inverse CDF of the F distribution."""
    _check(p, df1, df2)
    # P(F <= x) = I_z(df1/2, df2/2) with z = df1 x / (df1 x + df2)
    z, one_minus_z = _invert_beta(df1 / 2.0, df2 / 2.0, p)
    return df2 * z / (df1 * one_minus_z)
