"""L0-penalized joint normalization and DE detection.

The model is ``x[s,i,j] ~ N(mu[s,i] + d[s,j], sigma2[i])`` with an L0 penalty
``alpha[i]`` charged whenever gene ``i`` differs between groups. With the
variances held fixed the penalized likelihood separates: within-group sample
offsets have a closed form, and the between-group offsets ``d_2..d_S``
minimize ``G(d) = sum_i min(g_i(d), alpha_i)``, a sum of truncated quadratics.
For two groups ``G`` is minimized exactly by sweeping its breakpoints; for
three groups by a grid search polished with exact coordinate moves.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .stats import f_quantile, t_quantile
from .variance import VARIANCE_FLOOR, VarianceEstimates, estimate_variances

DEFAULT_Q = 0.01
GRID_RESOLUTION = 400
CD_TOL = 1e-8
_TIE_RTOL = 1e-12


# --- layout helpers -------------------------------------------------------


def _layout(groups):
    """Group sizes and the first column of each group (the within-group reference)."""
    groups = np.asarray(groups, dtype=int)
    S = int(groups.max())
    sizes = np.array([np.sum(groups == s) for s in range(1, S + 1)])
    first = np.array([np.flatnonzero(groups == s)[0] for s in range(1, S + 1)])
    return S, sizes, first


# --- closed-form pieces -----------------------------------------------------


def compute_dprime(x, groups, sigma2):
    """Within-group sample offsets relative to each group's first sample.

    Returns one value per column; the first column of every group is exactly 0.
    """
    x = np.asarray(x, dtype=float)
    groups = np.asarray(groups, dtype=int)
    sigma2 = np.asarray(sigma2, dtype=float)
    if np.any(sigma2 <= 0):
        raise ValueError("variances must be positive")
    w = 1.0 / sigma2
    S, _, first = _layout(groups)
    dprime = np.zeros(x.shape[1])
    for s in range(S):
        cols = np.flatnonzero(groups == s + 1)
        dprime[cols] = w @ (x[:, cols] - x[:, [first[s]]]) / w.sum()
        dprime[first[s]] = 0.0
    return dprime


def compute_muprime(x, groups, dprime):
    """Per-gene, per-group mean of offset-corrected data (m x S)."""
    x = np.asarray(x, dtype=float)
    groups = np.asarray(groups, dtype=int)
    S = int(groups.max())
    y = x - np.asarray(dprime)[None, :]
    return np.column_stack([y[:, groups == s + 1].mean(axis=1) for s in range(S)])


def g_statistic(mu_prime, d, n, sigma2):
    """Between-group discrepancy ``g_i`` of each gene at group offsets ``d``.

    ``mu_prime`` is (S,) or (m, S); ``d`` has length S with ``d[0] == 0``.
    Equals ``(1 / (2 sigma2)) * sum_s n_s (e_s - ebar)^2`` with
    ``e = mu_prime - d`` and ``ebar`` the size-weighted mean of ``e``.
    """
    e = np.asarray(mu_prime, dtype=float) - np.asarray(d, dtype=float)
    n = np.asarray(n, dtype=float)
    ebar = (e @ n) / n.sum()
    dev = e - np.expand_dims(ebar, -1)
    return (dev**2 @ n) / (2.0 * np.asarray(sigma2, dtype=float))


def G_value(mu_prime, d, n, sigma2, alpha):
    return float(np.sum(np.minimum(g_statistic(mu_prime, d, n, sigma2), alpha)))


def G_prime_value(delta, d, sigma2, lam):
    """Two-group objective ``sum_i (1/sigma2_i) min((delta_i - d)^2, lam_i^2)``."""
    return float(np.sum(np.minimum((delta - d) ** 2, np.asarray(lam) ** 2) / sigma2))


# --- tuning ------------------------------------------------------------------


def alpha_from_q(q, S, n, m=1):
    """Penalty per gene from the level-``q`` F critical value: ``(S-1)/2 * F*``."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    if n <= S:
        raise ValueError("no residual degrees of freedom (n <= S)")
    return np.full(m, (S - 1) / 2.0 * f_quantile(1.0 - q, S - 1, n - S))


def alpha_from_q_t(q, n1, n2, m=1):
    """Two-group penalty from the t critical value, ``t*^2 / 2``."""
    return np.full(m, 0.5 * t_quantile(1.0 - q / 2.0, n1 + n2 - 2) ** 2)


def lambda_from_alpha(alpha, sigma2, n1, n2):
    """Threshold on the between-group difference equivalent to ``alpha``."""
    n = n1 + n2
    return np.sqrt(2.0 * n * np.asarray(sigma2) * np.asarray(alpha) / (n1 * n2))


@dataclass(frozen=True)
class TuningParams:
    q: float
    alpha: np.ndarray
    lam: np.ndarray | None = None

    @classmethod
    def from_q(cls, q, sigma2, sizes):
        sizes = np.asarray(sizes)
        S, n = sizes.size, int(sizes.sum())
        alpha = alpha_from_q(q, S, n, m=len(sigma2))
        lam = lambda_from_alpha(alpha, sigma2, *sizes) if S == 2 else None
        return cls(q, alpha, lam)


# --- one-dimensional exact minimization -------------------------------------


def sweep_minimize(center, weight, radius):
    """Globally minimize ``F(t) = sum_i weight_i * min((t - center_i)^2, radius_i^2)``.

    ``F`` is piecewise quadratic with breakpoints ``center_i +- radius_i``.
    Each interval between consecutive breakpoints has a fixed set of
    untruncated terms, so its minimum is the clipped vertex of one quadratic.
    Infinite radii are allowed (always untruncated). Search is restricted to
    the breakpoint hull, outside of which ``F`` is constant. Ties within a
    relative ``1e-12`` go to the smallest ``t``.

    Returns ``(t, F(t))``.
    """
    c = np.asarray(center, dtype=float)
    w = np.broadcast_to(np.asarray(weight, dtype=float), c.shape)
    r = np.broadcast_to(np.asarray(radius, dtype=float), c.shape)
    if c.size == 0:
        return 0.0, 0.0
    # work in shifted coordinates to limit cancellation in A t^2 - 2 B t + C
    c0 = float(np.median(c))
    u = c - c0
    fin = np.isfinite(r)

    A0 = w[~fin].sum()
    B0 = (w * u)[~fin].sum()
    C0 = (w * u * u)[~fin].sum()

    if not fin.any():
        t = B0 / A0
        return t + c0, _direct(c, w, r, t + c0)

    uf, wf, rf = u[fin], w[fin], r[fin]
    lo, hi = uf - rf, uf + rf
    pts = np.unique(np.concatenate([lo, hi]))

    def cumsums(keys):
        order = np.argsort(keys, kind="stable")
        stacked = np.vstack([wf, wf * uf, wf * uf * uf, wf * rf * rf])[:, order]
        zero = np.zeros((4, 1))
        return keys[order], np.hstack([zero, np.cumsum(stacked, axis=1)])

    lo_sorted, cum_lo = cumsums(lo)
    hi_sorted, cum_hi = cumsums(hi)
    k_in = np.searchsorted(lo_sorted, pts[:-1], side="right")
    k_out = np.searchsorted(hi_sorted, pts[:-1], side="right")
    active = cum_lo[:, k_in] - cum_hi[:, k_out]
    A = A0 + active[0]
    B = B0 + active[1]
    C = C0 + active[2]
    K = cum_lo[3, -1] - active[3]

    a, b = pts[:-1], pts[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(A > 0, B / A, a)
    v = np.clip(v, a, b)
    vals = A * v * v - 2 * B * v + C + K
    # outside the hull only the untruncatable terms vary
    outer = [pts[0], pts[-1]]
    if A0 > 0:
        vertex = B0 / A0
        outer = [min(vertex, pts[0]), max(vertex, pts[-1])]
    outer = np.array(outer)
    v = np.concatenate([v, outer])
    vals = np.concatenate([vals, A0 * outer * outer - 2 * B0 * outer + C0 + cum_lo[3, -1]])

    # re-evaluate the near-best candidates exactly before breaking ties
    fmin = vals.min()
    slack = 1e-9 * max(1.0, abs(fmin))
    cand = np.unique(v[vals <= fmin + slack]) + c0
    exact = np.array([_direct(c, w, r, t) for t in cand])
    best = exact.min()
    pick = np.flatnonzero(exact <= best + _TIE_RTOL * max(1.0, abs(best)))[0]
    return float(cand[pick]), float(exact[pick])


def _direct(c, w, r, t):
    return float(np.sum(w * np.minimum((c - t) ** 2, r * r)))


# --- minimization of G -------------------------------------------------------


def two_group_offset(delta, sigma2, lam):
    """Exact minimizer of the two-group objective ``G'(d)``."""
    delta = np.asarray(delta, dtype=float)
    return sweep_minimize(delta, 1.0 / np.asarray(sigma2, dtype=float), lam)


def _coordinate_terms(mu_prime, d, s, n, sigma2):
    """Write each ``g_i`` as ``a_i (d_s - c_i)^2 + b_i`` with the other offsets fixed."""
    e = mu_prime - d
    N = n.sum()
    others = np.arange(n.size) != s
    n_o = n[others]
    e_o = e[:, others]
    ebar_o = (e_o @ n_o) / n_o.sum()
    a = n[s] * (N - n[s]) / (N * 2.0 * sigma2)
    c = mu_prime[:, s] - ebar_o
    b = ((e_o - ebar_o[:, None]) ** 2 @ n_o) / (2.0 * sigma2)
    return a, c, b


def coordinate_minimize(mu_prime, d, s, n, sigma2, alpha):
    """Exact global minimum of ``G`` over ``d_s`` with the other offsets fixed."""
    a, c, b = _coordinate_terms(mu_prime, d, s, n, sigma2)
    live = alpha > b
    const = np.sum(alpha[~live]) + np.sum(b[live])
    if not live.any():
        return float(d[s]), float(const)
    radius = np.sqrt((alpha[live] - b[live]) / a[live])
    t, val = sweep_minimize(c[live], a[live], radius)
    return t, val + const


def _active_set_vertex(mu_prime, d, n, sigma2, alpha):
    """Minimizer of ``sum g_i`` over the genes currently below their penalty."""
    act = g_statistic(mu_prime, d, n, sigma2) < alpha
    if not act.any():
        return None
    N = n.sum()
    M = np.diag(n) - np.outer(n, n) / N
    wts = 1.0 / (2.0 * sigma2[act])
    lhs = wts.sum() * M[1:, 1:]
    rhs = M[1:, :] @ (wts @ mu_prime[act])
    try:
        free = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError:
        return None
    return np.concatenate([[0.0], free])


def _coordinate_descent(mu_prime, d, n, sigma2, alpha, tol=CD_TOL, max_sweeps=1000):
    d = np.array(d, dtype=float)
    val = G_value(mu_prime, d, n, sigma2, alpha)
    for _ in range(20):
        for _ in range(max_sweeps):
            step = 0.0
            for s in range(1, n.size):
                t, new = coordinate_minimize(mu_prime, d, s, n, sigma2, alpha)
                if new < val or (new == val and t < d[s]):
                    step = max(step, abs(t - d[s]))
                    d[s], val = t, new
            if step < tol:
                break
        # coordinate moves can stall on a kink; jump to the active-set vertex
        v = _active_set_vertex(mu_prime, d, n, sigma2, alpha)
        if v is None:
            break
        vv = G_value(mu_prime, v, n, sigma2, alpha)
        if vv < val - _TIE_RTOL * max(1.0, abs(val)):
            d, val = v, vv
        else:
            break
    return d, val


def offset_box(mu_prime, n, sigma2, alpha):
    """Per-offset search interval outside which every gene is truncated."""
    delta = mu_prime[:, 1:] - mu_prime[:, [0]]
    lo, hi = [], []
    for s in range(1, n.size):
        r = np.sqrt(2.0 * sigma2 * alpha * (n[0] + n[s]) / (n[0] * n[s])).max()
        lo.append(delta[:, s - 1].min() - r)
        hi.append(delta[:, s - 1].max() + r)
    return np.array(lo), np.array(hi)


def minimize_G(mu_prime, sigma2, alpha, n, resolution=GRID_RESOLUTION, n_starts=5):
    """Global minimization of ``G`` over the between-group offsets.

    Returns ``(d, G_min)`` where ``d`` has length S and ``d[0] == 0``. Two
    groups are solved exactly; three groups by a ``resolution``-square grid
    followed by exact coordinate descent from the best ``n_starts`` cells.
    """
    mu_prime = np.atleast_2d(np.asarray(mu_prime, dtype=float))
    n = np.asarray(n, dtype=float)
    S = n.size
    sigma2 = np.broadcast_to(np.asarray(sigma2, dtype=float), mu_prime.shape[:1])
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), mu_prime.shape[:1])
    if S < 2:
        raise ValueError("need at least two groups")
    if S > 3:
        raise ValueError("exhaustive search only supported for low-dimensional cases (S <= 3)")
    d0 = np.zeros(S)
    if S == 2:
        t, val = coordinate_minimize(mu_prime, d0, 1, n, sigma2, alpha)
        d0[1] = t
        return d0, G_value(mu_prime, d0, n, sigma2, alpha)

    lo, hi = offset_box(mu_prime, n, sigma2, alpha)
    ax2 = np.linspace(lo[0], hi[0], resolution)
    ax3 = np.linspace(lo[1], hi[1], resolution)
    surface = G_surface(mu_prime, sigma2, alpha, n, ax2, ax3)
    flat = np.argsort(surface, axis=None, kind="stable")[:n_starts]
    results = []
    for k in flat:
        i, j = np.unravel_index(k, surface.shape)
        start = np.array([0.0, ax2[i], ax3[j]])
        results.append(_coordinate_descent(mu_prime, start, n, sigma2, alpha))
    best = min(val for _, val in results)
    tied = [d for d, val in results if val <= best + _TIE_RTOL * max(1.0, abs(best))]
    d = min(tied, key=lambda v: (v[1], v[2]))
    return d, G_value(mu_prime, d, n, sigma2, alpha)


def G_surface(mu_prime, sigma2, alpha, n, ax2, ax3):
    """``G`` on the grid ``ax2 x ax3`` (rows index ``d_2``)."""
    out = np.empty((ax2.size, ax3.size))
    D3 = np.asarray(ax3)
    for i, d2 in enumerate(ax2):
        d = np.zeros((D3.size, 3))
        d[:, 1] = d2
        d[:, 2] = D3
        # (grid, genes, S)
        g = g_statistic(mu_prime[None, :, :], d[:, None, :], n, sigma2[None, :])
        out[i] = np.minimum(g, alpha[None, :]).sum(axis=1)
    return out


# --- final estimates ---------------------------------------------------------


def finalize(mu_prime, d, alpha, sigma2, n):
    """Effects, baseline means and DE calls at group offsets ``d``.

    A gene is non-DE when ``g_i < alpha_i`` strictly. Returns
    ``(gamma, mu, tau, g)`` with ``gamma`` of shape (m, S-1).
    """
    mu_prime = np.asarray(mu_prime, dtype=float)
    d = np.asarray(d, dtype=float)
    n = np.asarray(n, dtype=float)
    g = g_statistic(mu_prime, d, n, sigma2)
    null = g < alpha
    gamma = mu_prime[:, 1:] - mu_prime[:, [0]] - d[None, 1:]
    gamma[null] = 0.0
    mu = np.where(null, ((mu_prime - d) @ n) / n.sum(), mu_prime[:, 0])
    tau = (~null).astype(int)
    return gamma, mu, tau, g


def finalize_two_group(delta, mu_prime, d, lam, n1, n2):
    """Two-group form of :func:`finalize` using the threshold ``|delta - d| < lam``."""
    resid = np.asarray(delta) - d
    null = np.abs(resid) < lam
    gamma = np.where(null, 0.0, resid)
    mu = np.where(null, (n1 * mu_prime[:, 0] + n2 * (mu_prime[:, 1] - d)) / (n1 + n2), mu_prime[:, 0])
    return gamma[:, None], mu, (~null).astype(int)


def penalized_objective(x, groups, mu, gamma, d_full, sigma2, alpha):
    """Negative log-likelihood (variances known) plus the L0 penalty."""
    x = np.asarray(x, dtype=float)
    groups = np.asarray(groups, dtype=int)
    gamma_all = np.hstack([np.zeros((x.shape[0], 1)), np.asarray(gamma)])
    fitted = mu[:, None] + gamma_all[:, groups - 1] + np.asarray(d_full)[None, :]
    loss = np.sum(((x - fitted) ** 2).sum(axis=1) / (2.0 * sigma2))
    de = np.abs(gamma_all).sum(axis=1) > 0
    return float(loss + np.sum(np.asarray(alpha)[de]))


# --- driver ------------------------------------------------------------------


@dataclass
class ModelFit:
    d_prime: np.ndarray
    mu_prime: np.ndarray
    d_group: np.ndarray
    d_full: np.ndarray
    gamma: np.ndarray
    mu: np.ndarray
    tau: np.ndarray
    score: np.ndarray
    g: np.ndarray
    objective: float
    G_min: float
    sigma2: np.ndarray
    alpha: np.ndarray
    q: float
    lam: np.ndarray | None = None
    variances: VarianceEstimates | None = None
    path: str = "general"
    gene_ids: list = field(default_factory=list)
    sample_ids: list = field(default_factory=list)
    group_of_sample: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def n_de(self):
        return int(self.tau.sum())

    def to_dict(self):
        out = {
            "q": self.q,
            "path": self.path,
            "objective": self.objective,
            "G_min": self.G_min,
            "gene_ids": list(self.gene_ids),
            "sample_ids": list(self.sample_ids),
            "group_of_sample": np.asarray(self.group_of_sample).tolist(),
            "d": self.d_full.tolist(),
            "d_group": self.d_group.tolist(),
            "d_prime": self.d_prime.tolist(),
            "gamma": self.gamma.tolist(),
            "mu": self.mu.tolist(),
            "tau": self.tau.tolist(),
            "score": self.score.tolist(),
            "sigma2_hat": self.sigma2.tolist(),
            "alpha": self.alpha.tolist(),
            "n_de": self.n_de,
            "provenance": dict(self.provenance),
        }
        if self.lam is not None:
            out["lambda"] = np.asarray(self.lam).tolist()
        if self.variances is not None:
            v = self.variances
            out["variance"] = {
                "s2_group": v.s2_group.tolist(),
                "s2_pooled": v.s2_pooled.tolist(),
                "s2_bar": v.s2_bar,
                "w": v.w,
                "w_raw": v.w_raw,
                "iterations_used": v.iterations_used.tolist(),
                "converged": v.converged.tolist(),
            }
        return out

    def to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    def write_gamma_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            S = self.gamma.shape[1] + 1
            writer.writerow(["gene_id"] + [f"gamma_{s}" for s in range(2, S + 1)] + ["mu", "tau", "score"])
            for i, gid in enumerate(self.gene_ids):
                writer.writerow([gid, *map(repr, self.gamma[i].tolist()), repr(float(self.mu[i])),
                                 int(self.tau[i]), repr(float(self.score[i]))])


def fit(x, q=DEFAULT_Q, path="auto", sigma2=None, provenance=None) -> ModelFit:
    """Fit the penalized model to a :class:`~robustde.ingest.LogExpressionMatrix`.

    Parameters
    ----------
    x : LogExpressionMatrix
    q : float
        Level used to set the penalties from F (or t) critical values.
    path : {"auto", "two_group", "general"}
        ``auto`` uses the threshold form for two groups.
    sigma2 : array, optional
        Known gene variances; estimated from the data when omitted.
    """
    values = x.values
    groups = x.group_of_sample
    S, sizes, _ = _layout(groups)
    m = values.shape[0]
    if m < 2:
        raise ValueError("need at least two genes")
    if np.any(sizes < 2):
        raise ValueError("every group needs at least 2 samples")
    if S > 3:
        raise ValueError("exhaustive search only supported for low-dimensional cases (S <= 3)")
    if path not in ("auto", "two_group", "general"):
        raise ValueError(f"unknown path {path!r}")
    if path == "two_group" and S != 2:
        raise ValueError("two_group path needs exactly two groups")

    variances = None
    if sigma2 is None:
        variances = estimate_variances(x)
        sigma2 = variances.sigma2_hat
    sigma2 = np.maximum(np.asarray(sigma2, dtype=float), VARIANCE_FLOOR)

    tuning = TuningParams.from_q(q, sigma2, sizes)
    alpha = tuning.alpha
    dprime = compute_dprime(values, groups, sigma2)
    mu_prime = compute_muprime(values, groups, dprime)
    n = sizes.astype(float)

    if S == 2 and path in ("auto", "two_group"):
        used = "two_group"
        delta = mu_prime[:, 1] - mu_prime[:, 0]
        dhat, _ = two_group_offset(delta, sigma2, tuning.lam)
        d = np.array([0.0, dhat])
        gamma, mu, tau = finalize_two_group(delta, mu_prime, dhat, tuning.lam, *sizes)
        g = g_statistic(mu_prime, d, n, sigma2)
        score = ((delta - dhat) / tuning.lam) ** 2
    else:
        used = "general"
        d, _ = minimize_G(mu_prime, sigma2, alpha, n)
        gamma, mu, tau, g = finalize(mu_prime, d, alpha, sigma2, n)
        score = g / alpha

    d_full = d[groups - 1] + dprime
    return ModelFit(
        d_prime=dprime,
        mu_prime=mu_prime,
        d_group=d,
        d_full=d_full,
        gamma=gamma,
        mu=mu,
        tau=tau,
        score=score,
        g=g,
        objective=penalized_objective(values, groups, mu, gamma, d_full, sigma2, alpha),
        G_min=G_value(mu_prime, d, n, sigma2, alpha),
        sigma2=sigma2,
        alpha=alpha,
        q=q,
        lam=tuning.lam,
        variances=variances,
        path=used,
        gene_ids=list(x.gene_ids),
        sample_ids=list(x.sample_ids),
        group_of_sample=groups,
        provenance={"unit": x.unit, "pseudocount": x.pseudocount, **(provenance or {})},
    )


# --- objective landscapes ----------------------------------------------------


@dataclass
class Landscape:
    """Objective values on a grid plus the exact minimizer."""

    axes: list
    values: np.ndarray
    minimizer: np.ndarray
    minimum: float

    @property
    def grid_argmin(self):
        idx = np.unravel_index(np.argmin(self.values), self.values.shape)
        return np.array([ax[k] for ax, k in zip(self.axes, idx)])

    def to_csv(self, path):
        names = ["d"] if len(self.axes) == 1 else ["d2", "d3"]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["kind", *names, "G"])
            if len(self.axes) == 1:
                for d, val in zip(self.axes[0], self.values):
                    writer.writerow(["grid", repr(float(d)), repr(float(val))])
            else:
                for i, d2 in enumerate(self.axes[0]):
                    for j, d3 in enumerate(self.axes[1]):
                        writer.writerow(["grid", repr(float(d2)), repr(float(d3)), repr(float(self.values[i, j]))])
            writer.writerow(["min", *(repr(float(v)) for v in self.minimizer), repr(self.minimum)])


def export_G_landscape(mu_prime, sigma2, n=None, alpha=None, lam=None, grid=None, num=401):
    """Tabulate the offset objective for plotting.

    Two groups use ``G'(d) = sum (1/sigma2) min((delta - d)^2, lam^2)``;
    ``lam`` may be given directly or derived from ``alpha`` and ``n``.
    Three groups use ``G(d2, d3)`` and need ``alpha`` and ``n``. ``grid`` is
    one array per free offset; by default ``num`` points span the region
    where any gene is untruncated.
    """
    mu_prime = np.asarray(mu_prime, dtype=float)
    m, S = mu_prime.shape
    sigma2 = np.broadcast_to(np.asarray(sigma2, dtype=float), (m,))
    if S == 2:
        delta = mu_prime[:, 1] - mu_prime[:, 0]
        if lam is None:
            if alpha is None or n is None:
                raise ValueError("two-group landscape needs lam or (alpha, n)")
            lam = lambda_from_alpha(np.broadcast_to(alpha, (m,)), sigma2, *n)
        lam = np.broadcast_to(np.asarray(lam, dtype=float), (m,))
        if grid is None:
            span = np.where(np.isfinite(lam), lam, 0.0).max()
            extra = max(span, delta.std() if m > 1 else 1.0)
            grid = [np.linspace(delta.min() - extra, delta.max() + extra, num)]
        axis = np.asarray(grid[0], dtype=float)
        if axis.size == 0:
            raise ValueError("empty grid")
        values = np.sum(np.minimum((delta[None, :] - axis[:, None]) ** 2, lam[None, :] ** 2) / sigma2, axis=1)
        dmin, gmin = two_group_offset(delta, sigma2, lam)
        return Landscape([axis], values, np.array([dmin]), gmin)
    if S == 3:
        if alpha is None or n is None:
            raise ValueError("three-group landscape needs alpha and n")
        n = np.asarray(n, dtype=float)
        alpha = np.broadcast_to(np.asarray(alpha, dtype=float), (m,))
        if grid is None:
            lo, hi = offset_box(mu_prime, n, sigma2, alpha)
            grid = [np.linspace(lo[0], hi[0], num), np.linspace(lo[1], hi[1], num)]
        ax2, ax3 = (np.asarray(a, dtype=float) for a in grid)
        if ax2.size == 0 or ax3.size == 0:
            raise ValueError("empty grid")
        values = G_surface(mu_prime, sigma2, alpha, n, ax2, ax3)
        d, gmin = minimize_G(mu_prime, sigma2, alpha, n)
        return Landscape([ax2, ax3], values, d[1:], gmin)
    raise ValueError("landscapes are only defined for two or three groups")


def figure_inputs(name, seed=0, m=100):
    """Synthetic offset-objective settings: ``fig1a``/``fig1b`` (two groups,
    lam 0.2 / 1) and ``fig2a``/``fig2b`` (three groups of 10, alpha 1 / 5).

    Returns a dict of keyword arguments for :func:`export_G_landscape`.
    """
    rng = np.random.default_rng(seed)
    settings = {"fig1a": (2, {"lam": 0.2}), "fig1b": (2, {"lam": 1.0}),
                "fig2a": (3, {"alpha": 1.0}), "fig2b": (3, {"alpha": 5.0})}
    if name not in settings:
        raise ValueError(f"unknown figure setting {name!r}")
    S, extra = settings[name]
    kwargs = {"mu_prime": rng.normal(size=(m, S)), "sigma2": np.ones(m)}
    if S == 3:
        kwargs["n"] = np.array([10, 10, 10])
    kwargs.update(extra)
    return kwargs
