"""Synthetic RNA-Seq count data with known differential expression.

Two generators are provided:

``multinomial31``
    Log expression is drawn per gene and sample, turned into length-weighted
    proportions and sampled multinomially at a random library size, plus one.
``lognormal32`` / ``negbinomial32``
    Two groups of four samples with a chosen share of DE genes and of
    up-regulated genes among them; counts are log-normal around their means
    or gamma-Poisson (negative binomial).

The base-expression, library-size and dispersion laws for the second pair
are parametric stand-ins chosen for this package, not estimates from any
real dataset.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .ingest import CountMatrix, write_groups_tsv, write_lengths_tsv, write_matrix_tsv

KINDS = ("multinomial31", "lognormal32", "negbinomial32")


@dataclass(frozen=True)
class SimScenario:
    kind: str = "multinomial31"
    m: int = 1000
    n_per_group: tuple = (4, 4)
    de_fraction: float = 0.3
    up_fraction: float = 1.0
    shift_mean: float = 0.0
    shift_sd: float = 1.0
    noise_var: float = 0.2
    depth_range: tuple = (3e7, 5e7)
    seed: int = 0
    base_mean: float = -3.0
    base_var: float = 2.0
    offset_var: float = 0.5
    log_length_range: tuple = (5.0, 10.0)
    sigma_ln: float = 0.5
    dispersion_meanlog: float = -2.0
    dispersion_sdlog: float = 1.0
    # how N(a, b) parameters are read: "variance" or "sd"
    variance_convention: str = "variance"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if not 0 <= self.de_fraction <= 1 or not 0 <= self.up_fraction <= 1:
            raise ValueError("de_fraction and up_fraction must lie in [0, 1]")
        if self.m < 1 or any(k < 1 for k in self.n_per_group):
            raise ValueError("need at least one gene and one sample per group")
        if self.variance_convention not in ("variance", "sd"):
            raise ValueError("variance_convention must be 'variance' or 'sd'")
        object.__setattr__(self, "n_per_group", tuple(int(k) for k in self.n_per_group))
        object.__setattr__(self, "depth_range", tuple(float(v) for v in self.depth_range))
        object.__setattr__(self, "log_length_range", tuple(float(v) for v in self.log_length_range))

    def sd(self, b):
        return math.sqrt(b) if self.variance_convention == "variance" else b

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown scenario fields {sorted(unknown)}")
        return cls(**d)


def _figure3(de, shift):
    # N(a, b) read as standard deviation; see the variance_convention field
    return SimScenario(kind="multinomial31", m=1000, n_per_group=(4, 4), de_fraction=de,
                       shift_mean=shift, shift_sd=1.0, variance_convention="sd")


def _table(kind, de, up):
    return SimScenario(kind=kind, m=1000, n_per_group=(4, 4), de_fraction=de / 100,
                       up_fraction=up / 100, shift_mean=math.log(3), shift_sd=1.0)


PRESETS = {
    "figure3a": _figure3(0.3, 0.0),
    "figure3b": _figure3(0.7, 1.0),
    "figure3c": _figure3(0.9, 1.0),
    "figure3d": _figure3(0.9, 3.0),
}
for _table_no, _kind in ((1, "lognormal32"), (2, "negbinomial32")):
    for _de in (30, 70):
        for _up in (50, 70, 90):
            PRESETS[f"table{_table_no}_{_de}{_up}"] = _table(_kind, _de, _up)


def preset(name, seed=0, **overrides) -> SimScenario:
    try:
        sc = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return sc.replace(seed=seed, **overrides)


@dataclass
class SimOutput:
    counts: CountMatrix
    is_de: np.ndarray
    mu_1: np.ndarray
    mu_2: np.ndarray
    d_true: np.ndarray  # effective log offset of each sample
    scenario: SimScenario
    n_de: int
    extras: dict = field(default_factory=dict)

    @property
    def gamma_true(self):
        return self.mu_2 - self.mu_1

    def identifiable_offsets(self):
        """True offsets under the convention that the first group-1 sample is 0."""
        ref = np.flatnonzero(self.counts.group_of_sample == 1)[0]
        return self.d_true - self.d_true[ref]

    def write(self, outdir, prefix=""):
        """Write counts, groups, lengths, truth and scenario files into ``outdir``."""
        from pathlib import Path

        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        cm = self.counts
        paths = {
            "counts": out / f"{prefix}counts.tsv",
            "groups": out / f"{prefix}groups.tsv",
            "lengths": out / f"{prefix}lengths.tsv",
            "truth": out / f"{prefix}truth.tsv",
            "scenario": out / f"{prefix}scenario.json",
        }
        write_matrix_tsv(paths["counts"], cm.gene_ids, cm.sample_ids, cm.counts)
        write_groups_tsv(paths["groups"], cm.sample_ids, cm.group_of_sample)
        write_lengths_tsv(paths["lengths"], cm.gene_ids, cm.gene_lengths)
        with open(paths["truth"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write("gene_id\tis_de\tgamma_true\n")
            for gid, de, g in zip(cm.gene_ids, self.is_de, self.gamma_true):
                fh.write(f"{gid}\t{int(de)}\t{float(g)!r}\n")
        meta = {"scenario": self.scenario.to_dict(), "n_de": self.n_de,
                "d_true": self.d_true.tolist()}
        paths["scenario"].write_text(json.dumps(meta, indent=1) + "\n", encoding="utf-8")
        return paths


# --- random draws ------------------------------------------------------------


def make_rng(seed):
    return np.random.default_rng(int(seed))


def replicate_seeds(master_seed, k):
    """Independent 64-bit seeds for ``k`` replicates.

    Replicate ``r`` gets the first 64-bit word of
    ``SeedSequence(master_seed).spawn(k)[r]``.
    """
    children = np.random.SeedSequence(int(master_seed)).spawn(k)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def negative_binomial(rng, mean, dispersion):
    """Negative-binomial draws as a gamma-mixed Poisson.

    Variance is ``mean + dispersion * mean**2``.
    """
    mean = np.asarray(mean, dtype=float)
    dispersion = np.broadcast_to(np.asarray(dispersion, dtype=float), mean.shape)
    if np.any(mean < 0) or np.any(dispersion <= 0):
        raise ValueError("negative-binomial needs mean >= 0 and dispersion > 0")
    rate = rng.gamma(shape=1.0 / dispersion, scale=mean * dispersion)
    return rng.poisson(rate)


def _count_de(fraction, total):
    return int(math.floor(fraction * total + 0.5))


def _layout(sc):
    groups = np.repeat(np.arange(1, len(sc.n_per_group) + 1), sc.n_per_group)
    sample_ids = [f"g{s}_{j + 1}" for s, k in enumerate(sc.n_per_group, start=1) for j in range(k)]
    gene_ids = [f"gene{i + 1:0{len(str(sc.m))}d}" for i in range(sc.m)]
    return groups, sample_ids, gene_ids


# --- generators --------------------------------------------------------------


def simulate_multinomial(sc: SimScenario) -> SimOutput:
    """Log-normal expression sampled into multinomial counts (plus one).

    The last ``round(de_fraction * m)`` genes are DE with group-2 shift
    ``N(shift_mean, shift_sd)``; all other laws follow the scenario fields.
    """
    if sc.kind != "multinomial31":
        raise ValueError("simulate_multinomial needs kind='multinomial31'")
    if len(sc.n_per_group) != 2:
        raise ValueError("multinomial scenario is two-group")
    rng = make_rng(sc.seed)
    groups, sample_ids, gene_ids = _layout(sc)
    m, n = sc.m, groups.size
    n_de = _count_de(sc.de_fraction, m)
    is_de = np.zeros(m, dtype=bool)
    is_de[m - n_de:] = True

    mu1 = rng.normal(sc.base_mean, sc.sd(sc.base_var), size=m)
    mu2 = mu1.copy()
    mu2[is_de] += rng.normal(sc.shift_mean, sc.shift_sd, size=n_de)
    d = rng.normal(0.0, sc.sd(sc.offset_var), size=n)
    mu = np.column_stack([mu1, mu2])[:, groups - 1]
    x = rng.normal(mu + d[None, :], sc.sd(sc.noise_var))
    log_len = rng.uniform(*sc.log_length_range, size=m)
    depth = np.rint(rng.uniform(*sc.depth_range, size=n)).astype(np.int64)

    logw = log_len[:, None] + x
    logw -= logw.max(axis=0)
    weights = np.exp(logw)
    p = weights / weights.sum(axis=0)
    counts = np.empty((m, n), dtype=np.int64)
    for j in range(n):
        counts[:, j] = rng.multinomial(depth[j], p[:, j]) + 1

    # log E[c] = log l + x + log N - log sum(l e^x)
    log_norm = np.log(np.exp(log_len[:, None] + x).sum(axis=0))
    d_eff = d + np.log(depth) - log_norm

    cm = CountMatrix(gene_ids, counts, groups, np.exp(log_len), sample_ids)
    return SimOutput(cm, is_de, mu1, mu2, d_eff, sc, n_de,
                     extras={"d": d, "depth": depth, "x": x})


def simulate_benchmark(sc: SimScenario) -> SimOutput:
    """Two-group log-normal or negative-binomial counts with mixed-direction DE.

    A random ``round(de_fraction * m)`` genes are DE; ``round(up_fraction *
    n_de)`` of them go up in group 2 and the rest down, each by a magnitude
    drawn from ``N(shift_mean, shift_sd)``. Expected counts are
    ``depth * l_i exp(base_i + gamma_si) / sum_k l_k exp(base_k + gamma_sk)``.
    """
    if sc.kind not in ("lognormal32", "negbinomial32"):
        raise ValueError("simulate_benchmark needs kind 'lognormal32' or 'negbinomial32'")
    if len(sc.n_per_group) != 2:
        raise ValueError("benchmark scenario is two-group")
    rng = make_rng(sc.seed)
    groups, sample_ids, gene_ids = _layout(sc)
    m, n = sc.m, groups.size
    n_de = _count_de(sc.de_fraction, m)
    n_up = _count_de(sc.up_fraction, n_de)

    de_idx = rng.permutation(m)[:n_de]
    is_de = np.zeros(m, dtype=bool)
    is_de[de_idx] = True
    magnitude = rng.normal(sc.shift_mean, sc.shift_sd, size=n_de)
    sign = np.where(np.arange(n_de) < n_up, 1.0, -1.0)
    lfc = np.zeros(m)
    lfc[de_idx] = sign * magnitude
    direction = np.zeros(m)
    direction[de_idx] = sign

    base = rng.normal(sc.base_mean, sc.sd(sc.base_var), size=m)
    log_len = rng.uniform(*sc.log_length_range, size=m)
    depth = rng.uniform(*sc.depth_range, size=n)
    mu1, mu2 = base, base + lfc

    level = np.column_stack([mu1, mu2]) + log_len[:, None]
    log_norm = np.log(np.exp(level - level.max()).sum(axis=0)) + level.max()
    log_mean = level[:, groups - 1] - log_norm[groups - 1] + np.log(depth)[None, :]

    extras = {"depth": depth, "direction": direction}
    if sc.kind == "lognormal32":
        counts = np.rint(np.exp(log_mean + rng.normal(0.0, sc.sigma_ln, size=(m, n))))
    else:
        dispersion = np.exp(rng.normal(sc.dispersion_meanlog, sc.dispersion_sdlog, size=m))
        counts = negative_binomial(rng, np.exp(log_mean), dispersion[:, None]).astype(float)
        extras["dispersion"] = dispersion
    d_eff = np.log(depth) - log_norm[groups - 1]

    cm = CountMatrix(gene_ids, counts, groups, np.exp(log_len), sample_ids)
    return SimOutput(cm, is_de, mu1, mu2, d_eff, sc, n_de, extras)


def simulate(sc: SimScenario) -> SimOutput:
    if sc.kind == "multinomial31":
        return simulate_multinomial(sc)
    return simulate_benchmark(sc)
