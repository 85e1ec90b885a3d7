"""
Within-sample units and the log transform
=========================================

Counts, CPM, RPKM and TPM differ by per-sample and per-gene factors only,
so on the log scale they differ by column and row constants.
"""

import numpy as np

from robustde.ingest import CountMatrix, convert_units, log_transform

counts = np.array([[0, 10, 4, 8],
                   [7, 2, 0, 5],
                   [100, 50, 75, 60],
                   [3, 3, 3, 9]])
lengths = np.array([1500.0, 800.0, 3000.0, 450.0])
cm = CountMatrix(["a", "b", "c", "d"], counts, [1, 1, 2, 2], lengths)

# CPM and TPM columns sum to a million
for unit in ("cpm", "tpm"):
    print(unit, convert_units(cm, unit, pseudocount=1.0).sum(axis=0))

# log CPM minus log counts is one number per sample
lc = log_transform(cm, "counts").values
lcpm = log_transform(cm, "cpm").values
print("log cpm - log counts:\n", np.round(lcpm - lc, 4))

# log RPKM minus log CPM is one number per gene
lrpkm = log_transform(cm, "rpkm").values
print("log rpkm - log cpm:\n", np.round(lrpkm - lcpm, 4))
