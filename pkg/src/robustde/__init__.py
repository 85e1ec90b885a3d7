"""Joint between-sample normalization and differential-expression detection
for RNA-Seq counts via an L0-penalized likelihood."""

from .evaluate import auc, baseline_median_ttest, roc_points, run_benchmark
from .fitter import (
    ModelFit,
    alpha_from_q,
    compute_dprime,
    compute_muprime,
    export_G_landscape,
    finalize,
    fit,
    g_statistic,
    lambda_from_alpha,
    minimize_G,
)
from .ingest import CountMatrix, LogExpressionMatrix, log_transform, to_cpm, to_rpkm, to_tpm
from .simulate import SimScenario, preset, simulate
from .stats import f_quantile, t_quantile
from .variance import eb_shrink, estimate_variances, irls_group, pool_variances

__all__ = [
    "CountMatrix", "LogExpressionMatrix", "ModelFit", "SimScenario",
    "alpha_from_q", "auc", "baseline_median_ttest", "compute_dprime", "compute_muprime",
    "eb_shrink", "estimate_variances", "export_G_landscape", "f_quantile", "finalize", "fit",
    "g_statistic", "irls_group", "lambda_from_alpha", "log_transform", "minimize_G",
    "pool_variances", "preset", "roc_points", "run_benchmark", "simulate", "t_quantile",
    "to_cpm", "to_rpkm", "to_tpm",
]

__version__ = "0.1.0"
