"""Unit conversion, model fitting, simulation and benchmarking for RNA-Seq counts.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import evaluate, fitter, ingest
from .simulate import PRESETS, SimScenario, preset, simulate

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(args, need_groups=True):
    gene_ids, sample_ids, counts = ingest.read_counts_tsv(args.counts)
    if need_groups:
        groups = ingest.read_groups_tsv(args.groups, sample_ids)
    else:
        groups = np.ones(len(sample_ids), dtype=int)
    lengths = ingest.read_lengths_tsv(args.lengths, gene_ids) if args.lengths else None
    return ingest.CountMatrix(gene_ids, counts, groups, lengths, sample_ids)


def cmd_units(args):
    cm = _load(args, need_groups=False)
    out = ingest.convert_units(cm, args.unit, args.pseudocount)
    ingest.write_matrix_tsv(args.output, cm.gene_ids, cm.sample_ids, out)
    print(f"units: wrote {args.unit} for {cm.shape[0]} genes x {cm.shape[1]} samples to {args.output}")


def cmd_fit(args):
    cm = _load(args)
    x = ingest.log_transform(cm, args.unit, args.pseudocount)
    model = fitter.fit(x, q=args.q, path=args.path)
    model.to_json(args.output)
    if args.gamma_csv:
        model.write_gamma_csv(args.gamma_csv)
    print(f"fit: {model.n_de} of {len(model.tau)} genes DE at q={args.q}; "
          f"d_group={np.round(model.d_group, 6).tolist()}; wrote {args.output}")


def _scenario(args):
    if args.scenario:
        with open(args.scenario, encoding="utf-8") as fh:
            data = json.load(fh)
        data = data.get("scenario", data)
        sc = SimScenario.from_dict(data)
        return sc if args.seed is None else sc.replace(seed=args.seed)
    if not args.preset:
        raise UsageError("give --preset or --scenario")
    try:
        return preset(args.preset, seed=args.seed or 0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args):
    sc = _scenario(args)
    sim = simulate(sc)
    paths = sim.write(args.outdir, prefix=args.prefix)
    print(f"simulate: {sc.kind} m={sc.m} n={list(sc.n_per_group)} DE={sim.n_de} seed={sc.seed}; "
          f"wrote {paths['counts']}")


def cmd_bench(args):
    sc = _scenario(args)
    methods = [m for m in args.methods.split(",") if m]
    unknown = [m for m in methods if m not in evaluate.METHODS]
    if unknown or not methods:
        raise UsageError(f"unknown methods {unknown}; choose from {sorted(evaluate.METHODS)}")
    if args.replicates < 2:
        raise UsageError("--replicates must be at least 2")
    results = evaluate.run_benchmark(sc, args.replicates, methods, q=args.q,
                                     pseudocount=args.pseudocount)
    rows = evaluate.benchmark_rows(sc, results)
    evaluate.write_benchmark_csv(args.output, rows)
    if args.roc_csv:
        fpr, tpr = results[methods[0]].roc
        evaluate.write_roc_csv(args.roc_csv, fpr, tpr)
    summary = ", ".join(f"{r['method']}={r['mean_auc']:.4f}({r['se_auc']:.4f})" for r in rows)
    print(f"bench: DE {rows[0]['de_pct']}% up {rows[0]['up_pct']}% x{args.replicates}: {summary}")


def _parse_grid(specs):
    axes = []
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 3 or not all(p.strip() for p in parts):
            raise UsageError(f"grid spec {spec!r} must be lo:hi:num")
        try:
            lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"bad grid spec {spec!r}") from None
        if num < 1 or not hi >= lo:
            raise UsageError(f"grid spec {spec!r} is empty")
        axes.append(np.linspace(lo, hi, num))
    return axes


def cmd_landscape(args):
    grid = _parse_grid(args.grid) if args.grid is not None else None
    if args.num is not None and args.num < 1:
        raise UsageError("--num must be positive")
    if args.figure:
        try:
            kwargs = fitter.figure_inputs(args.figure, seed=args.seed or 0)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if not args.counts or not args.groups:
            raise UsageError("give --figure or counts with --groups")
        cm = _load(args)
        x = ingest.log_transform(cm, args.unit, args.pseudocount)
        model = fitter.fit(x, q=args.q)
        sizes = x.group_sizes()
        kwargs = {"mu_prime": model.mu_prime, "sigma2": model.sigma2, "n": sizes, "alpha": model.alpha}
    if args.lam is not None:
        kwargs.pop("alpha", None)
        kwargs["lam"] = args.lam
    if args.no_threshold:
        kwargs.pop("alpha", None)
        kwargs["lam"] = np.inf
    S = np.asarray(kwargs["mu_prime"]).shape[1]
    if grid is not None and len(grid) != S - 1:
        raise UsageError(f"need {S - 1} --grid spec(s) for {S} groups")
    if S == 3 and "lam" in kwargs:
        raise UsageError("--lambda/--no-threshold apply to two groups only")
    land = fitter.export_G_landscape(grid=grid, num=args.num or 401, **kwargs)
    land.to_csv(args.output)
    print(f"landscape: {land.values.size} grid points; minimizer "
          f"{np.round(land.minimizer, 6).tolist()} G={land.minimum:.6g}; wrote {args.output}")


def build_parser():
    p = _Parser(prog="robustde", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_args(sp, groups=True):
        sp.add_argument("counts", help="count matrix TSV")
        if groups:
            sp.add_argument("--groups", required=True, help="sample_id<TAB>group TSV")
        sp.add_argument("--lengths", help="gene_id<TAB>length TSV")
        sp.add_argument("--unit", choices=ingest.UNITS, default="counts")
        sp.add_argument("--pseudocount", type=float, default=1.0)

    sp = sub.add_parser("units", help="convert counts to CPM/RPKM/TPM")
    data_args(sp, groups=False)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_units)

    sp = sub.add_parser("fit", help="fit the penalized model")
    data_args(sp)
    sp.add_argument("--q", type=float, default=fitter.DEFAULT_Q)
    sp.add_argument("--path", choices=("auto", "two_group", "general"), default="auto")
    sp.add_argument("-o", "--output", required=True, help="fit JSON")
    sp.add_argument("--gamma-csv")
    sp.set_defaults(func=cmd_fit)

    for name, func in (("simulate", cmd_simulate), ("bench", cmd_bench)):
        sp = sub.add_parser(name, help=f"{name} from a preset or scenario JSON")
        sp.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
        sp.add_argument("--scenario", help="scenario JSON")
        sp.add_argument("--seed", type=int)
        sp.set_defaults(func=func)
        if name == "simulate":
            sp.add_argument("-o", "--outdir", required=True)
            sp.add_argument("--prefix", default="")
        else:
            sp.add_argument("--replicates", type=int, default=10)
            sp.add_argument("--methods", default="l0,median_t")
            sp.add_argument("--q", type=float, default=fitter.DEFAULT_Q)
            sp.add_argument("--pseudocount", type=float, default=1.0)
            sp.add_argument("-o", "--output", required=True)
            sp.add_argument("--roc-csv")

    sp = sub.add_parser("landscape", help="tabulate the offset objective")
    sp.add_argument("counts", nargs="?")
    sp.add_argument("--groups")
    sp.add_argument("--lengths")
    sp.add_argument("--unit", choices=ingest.UNITS, default="counts")
    sp.add_argument("--pseudocount", type=float, default=1.0)
    sp.add_argument("--q", type=float, default=fitter.DEFAULT_Q)
    sp.add_argument("--figure", help="fig1a, fig1b, fig2a or fig2b")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--grid", action="append", help="lo:hi:num, once per free offset")
    sp.add_argument("--num", type=int, help="points per axis for the automatic grid")
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--no-threshold", action="store_true", help="lambda -> infinity")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_landscape)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"robustde {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"robustde {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
