"""Per-gene variance estimation for log expression data.

Each group is fitted on its own with a two-way layout (gene mean plus
sample offset, gene-specific variance) by alternating closed-form updates.
Group variances are pooled and then shrunk towards the genome-wide mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

VARIANCE_FLOOR = 1e-12


class IRLSResult(NamedTuple):
    s2: np.ndarray
    iterations: int
    converged: bool
    objective: list


@dataclass(frozen=True)
class VarianceEstimates:
    s2_group: np.ndarray  # m x S
    s2_pooled: np.ndarray
    s2_bar: float
    w: float
    w_raw: float
    sigma2_hat: np.ndarray
    iterations_used: np.ndarray
    converged: np.ndarray


def group_objective(x, mu, d, sigma2, ddof=1):
    """Negative log-likelihood of one group's block.

    With ``ddof=1`` the log term carries ``(n_s - 1) / 2`` so that the
    bias-reduced variance update is its exact minimizer; ``ddof=0`` gives
    the plain Gaussian likelihood.
    """
    x = np.asarray(x, dtype=float)
    ns = x.shape[1]
    rss = ((x - mu[:, None] - d[None, :]) ** 2).sum(axis=1)
    return float(np.sum(0.5 * (ns - ddof) * np.log(2 * np.pi * sigma2) + rss / (2 * sigma2)))


def irls_group(x_s, tol=1e-8, max_iter=100, floor=VARIANCE_FLOOR, ddof=1):
    """Estimate gene variances within one group.

    Parameters
    ----------
    x_s : (m, n_s) array
        Log expression block of one group.
    tol : float
        Stop once the largest relative parameter change falls below this.
        Mean and offset changes are measured against the root mean variance.
    ddof : int
        Divisor in the variance update is ``n_s - ddof``.

    Returns
    -------
    IRLSResult
        ``s2`` is the unfloored variance estimate at the last iterate; the
        floor only enters the weights. ``objective`` holds
        :func:`group_objective` after every iteration.
    """
    x = np.asarray(x_s, dtype=float)
    if x.ndim != 2:
        raise ValueError("x_s must be a 2-D genes x samples block")
    m, ns = x.shape
    if ns < 2:
        raise ValueError("cannot estimate within-group variance from fewer than 2 samples")
    if m < 1:
        raise ValueError("need at least one gene")

    d = np.zeros(ns)
    mu = x.mean(axis=1)
    sigma2 = np.ones(m)
    s2 = sigma2
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        mu_new = (x - d).mean(axis=1)
        wts = 1.0 / sigma2
        d_new = wts @ (x - mu_new[:, None]) / wts.sum()
        shift = d_new[0]
        d_new = d_new - shift
        mu_new = mu_new + shift
        s2 = ((x - mu_new[:, None] - d_new) ** 2).sum(axis=1) / (ns - ddof)
        sigma2_new = np.maximum(s2, floor)

        scale = np.sqrt(sigma2_new.mean())
        change = max(
            np.max(np.abs(mu_new - mu)) / scale,
            np.max(np.abs(d_new - d)) / scale,
            np.max(np.abs(sigma2_new - sigma2) / sigma2),
        )
        mu, d, sigma2 = mu_new, d_new, sigma2_new
        history.append(group_objective(x, mu, d, sigma2, ddof))
        if change < tol:
            converged = True
            break
    return IRLSResult(s2, it, converged, history)


def pool_variances(s2_group, n):
    """Degrees-of-freedom weighted average of per-group variances."""
    s2_group = np.asarray(s2_group, dtype=float)
    n = np.asarray(n, dtype=float)
    if s2_group.ndim == 1:
        s2_group = s2_group[None, :]
    if np.any(n < 2):
        raise ValueError("every group needs at least 2 samples")
    dof = n.sum() - n.size
    if dof <= 0:
        raise ValueError("no residual degrees of freedom")
    return s2_group @ (n - 1) / dof


def shrinkage_weight(s2, n, S):
    """Unclipped empirical-Bayes weight for the genome-wide mean variance."""
    s2 = np.asarray(s2, dtype=float)
    m = s2.size
    s2_bar = s2.mean()
    spread = np.sum((s2 - s2_bar) ** 2)
    if spread == 0:
        return 1.0
    return 2 * (m - 1) / (n - S + 2) * (1 / m + s2_bar**2 / spread)


def eb_shrink(s2, n, S):
    """Shrink pooled variances towards their mean.

    Returns ``(sigma2_hat, w)`` where ``w`` is clipped to [0, 1] and
    ``sigma2_hat = (1 - w) * s2 + w * mean(s2)``.
    """
    s2 = np.asarray(s2, dtype=float)
    if s2.size < 2:
        raise ValueError("shrinkage needs at least 2 genes")
    if n - S + 2 <= 0:
        raise ValueError("n - S + 2 must be positive")
    w = float(np.clip(shrinkage_weight(s2, n, S), 0.0, 1.0))
    return (1 - w) * s2 + w * s2.mean(), w


def estimate_variances(x, tol=1e-8, max_iter=100) -> VarianceEstimates:
    """Full variance pipeline for a :class:`~robustde.ingest.LogExpressionMatrix`."""
    values = x.values
    groups = x.group_of_sample
    S = x.n_groups
    sizes = x.group_sizes()
    m = values.shape[0]
    s2_group = np.empty((m, S))
    iters = np.empty(S, dtype=int)
    conv = np.empty(S, dtype=bool)
    for s in range(S):
        res = irls_group(values[:, groups == s + 1], tol=tol, max_iter=max_iter)
        s2_group[:, s] = res.s2
        iters[s] = res.iterations
        conv[s] = res.converged
    pooled = pool_variances(s2_group, sizes)
    n = int(sizes.sum())
    w_raw = shrinkage_weight(pooled, n, S)
    sigma2_hat, w = eb_shrink(pooled, n, S)
    return VarianceEstimates(
        s2_group=s2_group,
        s2_pooled=pooled,
        s2_bar=float(pooled.mean()),
        w=w,
        w_raw=float(w_raw),
        sigma2_hat=sigma2_hat,
        iterations_used=iters,
        converged=conv,
    )
