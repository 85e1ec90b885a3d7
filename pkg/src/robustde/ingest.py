"""Count matrices, quantification units and log transformation.

A count matrix holds one row per gene and one column per sample. Samples
carry a 1-based group label. Everything downstream works on the natural log
of (pseudocounted) expression values in one of four units.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

UNITS = ("counts", "cpm", "rpkm", "tpm")


class InputError(ValueError):
    """Malformed or invalid input data."""


@dataclass(frozen=True)
class CountMatrix:
    """Gene-by-sample read counts with group labels.

    ``counts`` may hold estimated (non-integer) counts. ``group_of_sample``
    uses labels 1..S and every label must occur at least once.
    """

    gene_ids: list
    counts: np.ndarray
    group_of_sample: np.ndarray
    gene_lengths: np.ndarray | None = None
    sample_ids: list | None = None

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim != 2:
            raise InputError("counts must be a 2-D gene x sample matrix")
        m, n = counts.shape
        if m < 1 or n < 1:
            raise InputError("count matrix needs at least one gene and one sample")
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            raise InputError("counts must be finite and nonnegative")
        if len(self.gene_ids) != m:
            raise InputError(f"{len(self.gene_ids)} gene ids for {m} rows")
        groups = np.asarray(self.group_of_sample, dtype=int)
        if groups.shape != (n,):
            raise InputError(f"{groups.size} group labels for {n} samples")
        S = int(groups.max())
        missing = sorted(set(range(1, S + 1)) - set(groups.tolist()))
        if groups.min() < 1 or missing:
            raise InputError(f"group labels must cover 1..{S}; missing {missing}")
        lengths = self.gene_lengths
        if lengths is not None:
            lengths = np.asarray(lengths, dtype=float)
            if lengths.shape != (m,):
                raise InputError(f"{lengths.size} gene lengths for {m} genes")
            bad = np.flatnonzero(~(lengths > 0))
            if bad.size:
                raise InputError(f"nonpositive length for gene {self.gene_ids[bad[0]]!r}")
        sample_ids = self.sample_ids
        if sample_ids is None:
            sample_ids = [f"sample{j + 1}" for j in range(n)]
        elif len(sample_ids) != n:
            raise InputError(f"{len(sample_ids)} sample ids for {n} columns")
        counts.setflags(write=False)
        groups.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "group_of_sample", groups)
        object.__setattr__(self, "gene_lengths", lengths)
        object.__setattr__(self, "gene_ids", list(self.gene_ids))
        object.__setattr__(self, "sample_ids", list(sample_ids))

    @property
    def shape(self):
        return self.counts.shape

    @property
    def n_groups(self):
        return int(self.group_of_sample.max())


@dataclass(frozen=True)
class LogExpressionMatrix:
    """Natural-log expression values ``x`` (genes x samples) and their provenance."""

    values: np.ndarray
    group_of_sample: np.ndarray
    unit: str = "counts"
    pseudocount: float = 1.0
    gene_ids: list = field(default_factory=list)
    sample_ids: list = field(default_factory=list)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise InputError("log expression must be a 2-D matrix")
        if not np.all(np.isfinite(values)):
            raise InputError("log expression values must be finite")
        groups = np.asarray(self.group_of_sample, dtype=int)
        if groups.shape != (values.shape[1],):
            raise InputError("one group label per column required")
        if self.unit not in UNITS:
            raise InputError(f"unknown unit {self.unit!r}")
        m, n = values.shape
        gene_ids = list(self.gene_ids) or [f"gene{i + 1}" for i in range(m)]
        sample_ids = list(self.sample_ids) or [f"sample{j + 1}" for j in range(n)]
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "group_of_sample", groups)
        object.__setattr__(self, "gene_ids", gene_ids)
        object.__setattr__(self, "sample_ids", sample_ids)

    @property
    def n_groups(self):
        return int(self.group_of_sample.max())

    def group_sizes(self):
        return np.bincount(self.group_of_sample, minlength=self.n_groups + 1)[1:]


def to_cpm(counts):
    """Counts per million for one column (or each column of a matrix)."""
    c = np.asarray(counts, dtype=float)
    total = c.sum(axis=0)
    if np.any(total <= 0):
        raise InputError("empty library: column sums to zero")
    return 1e6 * c / total


def to_rpkm(cpm, lengths, gene_ids=None):
    """Reads per kilobase per million from CPM and effective gene lengths."""
    cpm = np.asarray(cpm, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    bad = np.flatnonzero(~(lengths > 0))
    if bad.size:
        name = gene_ids[bad[0]] if gene_ids is not None else f"#{bad[0] + 1}"
        raise InputError(f"nonpositive length for gene {name}")
    if cpm.ndim == 2:
        lengths = lengths[:, None]
    return 1e3 * cpm / lengths


def to_tpm(rpkm):
    """Transcripts per million from RPKM values."""
    r = np.asarray(rpkm, dtype=float)
    total = r.sum(axis=0)
    if np.any(total <= 0):
        raise InputError("empty library: RPKM column sums to zero")
    return 1e6 * r / total


def convert_units(cm: CountMatrix, unit: str, pseudocount: float = 0.0) -> np.ndarray:
    """Return the gene x sample matrix of ``cm`` in ``unit`` (linear scale).

    The pseudocount is added to the raw counts before conversion.
    """
    if unit not in UNITS:
        raise InputError(f"unknown unit {unit!r}; expected one of {', '.join(UNITS)}")
    if pseudocount < 0:
        raise InputError("pseudocount must be nonnegative")
    c = cm.counts + pseudocount
    if unit == "counts":
        return c
    cpm = to_cpm(c)
    if unit == "cpm":
        return cpm
    if cm.gene_lengths is None:
        raise InputError(f"unit {unit!r} requires gene lengths")
    rpkm = to_rpkm(cpm, cm.gene_lengths, cm.gene_ids)
    if unit == "rpkm":
        return rpkm
    return to_tpm(rpkm)


def log_transform(cm: CountMatrix, unit: str = "counts", pseudocount: float = 1.0) -> LogExpressionMatrix:
    """Pseudocount, convert to ``unit``, then take the natural log."""
    values = convert_units(cm, unit, pseudocount)
    if np.any(values <= 0):
        i, j = np.argwhere(values <= 0)[0]
        raise InputError(
            f"nonpositive value under log (gene {cm.gene_ids[i]!r}, "
            f"sample {cm.sample_ids[j]!r}); use a positive pseudocount"
        )
    return LogExpressionMatrix(
        values=np.log(values),
        group_of_sample=cm.group_of_sample,
        unit=unit,
        pseudocount=float(pseudocount),
        gene_ids=cm.gene_ids,
        sample_ids=cm.sample_ids,
    )


# --- TSV I/O -------------------------------------------------------------


def _read_rows(path):
    text = Path(path).read_text(encoding="utf-8")
    # newline="" keeps CRLF handling inside csv
    reader = csv.reader(io.StringIO(text, newline=""), delimiter="\t")
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        yield lineno, [cell.strip() for cell in row]


def read_counts_tsv(path):
    """Read ``gene_id<TAB>sample1<TAB>...``; returns (gene_ids, sample_ids, matrix)."""
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise InputError(f"{path}: empty file") from None
    sample_ids = header[1:]
    if not sample_ids:
        raise InputError(f"{path}: header has no sample columns")
    gene_ids, data = [], []
    for lineno, row in rows:
        if len(row) != len(header):
            raise InputError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            values = [float(v) for v in row[1:]]
        except ValueError:
            raise InputError(f"{path}: line {lineno}: non-numeric value") from None
        gene_ids.append(row[0])
        data.append(values)
    if not data:
        raise InputError(f"{path}: no gene rows")
    return gene_ids, sample_ids, np.array(data, dtype=float)


def _read_two_column(path, kind):
    out = {}
    for lineno, row in _read_rows(path):
        if len(row) != 2:
            raise InputError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
        key, value = row
        try:
            out[key] = kind(value)
        except ValueError:
            if lineno == 1:  # optional header
                continue
            raise InputError(f"{path}: line {lineno}: bad value {value!r}") from None
    return out


def read_groups_tsv(path, sample_ids):
    """Group labels (``sample_id<TAB>group_index``) ordered like ``sample_ids``."""
    mapping = _read_two_column(path, int)
    missing = [s for s in sample_ids if s not in mapping]
    if missing:
        raise InputError(f"{path}: no group for samples {missing}")
    return np.array([mapping[s] for s in sample_ids], dtype=int)


def read_lengths_tsv(path, gene_ids):
    mapping = _read_two_column(path, float)
    missing = [g for g in gene_ids if g not in mapping]
    if missing:
        raise InputError(f"{path}: no length for genes {missing[:5]}")
    return np.array([mapping[g] for g in gene_ids], dtype=float)


def load_count_matrix(counts_path, groups_path, lengths_path=None) -> CountMatrix:
    gene_ids, sample_ids, counts = read_counts_tsv(counts_path)
    groups = read_groups_tsv(groups_path, sample_ids)
    lengths = read_lengths_tsv(lengths_path, gene_ids) if lengths_path else None
    return CountMatrix(gene_ids, counts, groups, lengths, sample_ids)


def _fmt(v):
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(float(v))


def write_matrix_tsv(path, gene_ids, sample_ids, matrix):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("gene_id\t" + "\t".join(sample_ids) + "\n")
        for gid, row in zip(gene_ids, np.asarray(matrix)):
            fh.write(gid + "\t" + "\t".join(_fmt(v) for v in row) + "\n")


def write_groups_tsv(path, sample_ids, groups):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sid, g in zip(sample_ids, groups):
            fh.write(f"{sid}\t{int(g)}\n")


def write_lengths_tsv(path, gene_ids, lengths):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for gid, length in zip(gene_ids, lengths):
            fh.write(f"{gid}\t{float(length)!r}\n")
