"""ROC/AUC scoring against simulated truth, a median-ratio baseline and replicate benchmarks."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .fitter import DEFAULT_Q, fit
from .ingest import log_transform
from .simulate import SimScenario, replicate_seeds, simulate

THREADS_ENV = "ROBUSTDE_THREADS"


def _check_labels(labels):
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == labels.size:
        raise ValueError("AUC needs at least one positive and one negative label")
    return labels, n_pos, labels.size - n_pos


def auc(scores, labels):
    """Area under the ROC curve, ties counted as one half (Mann-Whitney)."""
    scores = np.asarray(scores, dtype=float)
    labels, n_pos, n_neg = _check_labels(labels)
    ranks = rankdata(scores)  # average ranks; half-integers are exact in float64
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def roc_points(scores, labels):
    """ROC vertices from (0, 0) to (1, 1), one step per distinct score.

    Tied scores give a diagonal segment, so the trapezoid area equals :func:`auc`.
    """
    scores = np.asarray(scores, dtype=float)
    labels, n_pos, n_neg = _check_labels(labels)
    order = np.argsort(-scores, kind="stable")
    s, lab = scores[order], labels[order]
    tp = np.cumsum(lab)
    fp = np.cumsum(~lab)
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    fpr = np.r_[0.0, fp[last] / n_neg]
    tpr = np.r_[0.0, tp[last] / n_pos]
    return fpr, tpr


def trapezoid_area(fpr, tpr):
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def write_roc_csv(path, fpr, tpr):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["fpr", "tpr"])
        writer.writerows(zip(map(repr, fpr.tolist()), map(repr, tpr.tolist())))


def median_normalize(values, ref=0):
    """Subtract from each column the median log-ratio to column ``ref``."""
    values = np.asarray(values, dtype=float)
    factors = np.median(values - values[:, [ref]], axis=0)
    return values - factors[None, :], factors


def baseline_median_ttest(x, groups=None):
    """Median-ratio normalization then absolute pooled two-sample t-statistics.

    ``x`` is a LogExpressionMatrix or a raw (m, n) log-expression array.
    """
    if groups is None:
        groups = x.group_of_sample
        x = x.values
    groups = np.asarray(groups, dtype=int)
    if set(groups.tolist()) != {1, 2}:
        raise ValueError("baseline needs exactly two groups labelled 1 and 2")
    y, _ = median_normalize(x)
    a, b = y[:, groups == 1], y[:, groups == 2]
    n1, n2 = a.shape[1], b.shape[1]
    if n1 < 2 or n2 < 2:
        raise ValueError("baseline needs at least 2 samples per group")
    pooled = (a.var(axis=1, ddof=1) * (n1 - 1) + b.var(axis=1, ddof=1) * (n2 - 1)) / (n1 + n2 - 2)
    se = np.sqrt(np.maximum(pooled, 1e-12) * (1 / n1 + 1 / n2))
    return np.abs(b.mean(axis=1) - a.mean(axis=1)) / se


def _score_l0(x, q):
    return fit(x, q=q).score


def _score_median(x, q):
    return baseline_median_ttest(x)


METHODS = {"l0": _score_l0, "median_t": _score_median}


@dataclass
class EvalResult:
    method_label: str
    aucs: list = field(default_factory=list)
    roc: tuple | None = None  # (fpr, tpr) of the first replicate

    @property
    def n_replicates(self):
        return len(self.aucs)

    @property
    def auc(self):
        return self.aucs[0] if self.aucs else float("nan")

    @property
    def mean_auc(self):
        return float(np.mean(self.aucs))

    @property
    def se_auc(self):
        if len(self.aucs) < 2:
            return float("nan")
        return float(np.std(self.aucs, ddof=1) / np.sqrt(len(self.aucs)))


def _replicate(sc, seed, methods, unit, pseudocount, q):
    sim = simulate(sc.replace(seed=seed))
    x = log_transform(sim.counts, unit, pseudocount)
    out = {}
    for name in methods:
        scores = METHODS[name](x, q)
        out[name] = (auc(scores, sim.is_de), roc_points(scores, sim.is_de))
    return out


def run_benchmark(sc: SimScenario, n_replicates=10, methods=("l0", "median_t"), master_seed=None,
                  unit="counts", pseudocount=1.0, q=DEFAULT_Q, threads=None):
    """Simulate ``n_replicates`` datasets and score each method by AUC.

    Replicate seeds come from :func:`~robustde.simulate.replicate_seeds` with
    ``master_seed`` (default: the scenario seed), so the result depends only
    on the scenario, the seed and the method list.
    """
    if n_replicates < 2:
        raise ValueError("need at least 2 replicates")
    unknown = [mth for mth in methods if mth not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; choose from {sorted(METHODS)}")
    master = sc.seed if master_seed is None else master_seed
    seeds = replicate_seeds(master, n_replicates)
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))

    def one(seed):
        try:
            return _replicate(sc, seed, methods, unit, pseudocount, q)
        except Exception as exc:
            raise RuntimeError(f"replicate with seed {seed} failed: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep = list(pool.map(one, seeds))
    else:
        per_rep = [one(s) for s in seeds]

    results = {}
    for name in methods:
        res = EvalResult(name, [rep[name][0] for rep in per_rep], per_rep[0][name][1])
        results[name] = res
    return results


def benchmark_rows(sc, results):
    de_pct = round(sc.de_fraction * 100)
    up_pct = round(sc.up_fraction * 100)
    return [
        {"de_pct": de_pct, "up_pct": up_pct, "method": name, "mean_auc": res.mean_auc,
         "se_auc": res.se_auc, "n_replicates": res.n_replicates}
        for name, res in results.items()
    ]


BENCH_FIELDS = ["de_pct", "up_pct", "method", "mean_auc", "se_auc", "n_replicates"]


def write_benchmark_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def normalization_bias(model, sim):
    """Between-group offset error of a fit against simulation truth.

    Mean error of the fitted sample offsets in group 2 minus that in group 1,
    after expressing the true offsets relative to the first group-1 sample.
    """
    groups = sim.counts.group_of_sample
    err = model.d_full - sim.identifiable_offsets()
    return float(err[groups == 2].mean() - err[groups == 1].mean())


def gamma_correlation(model, sim):
    return float(np.corrcoef(model.gamma[:, 0], sim.gamma_true)[0, 1])
