"""Command-line entry point.

Subcommands: rate, threshold, dkw, oracle-suite, train, predict.  Experiment
subcommands read an optional JSON config file and accept flag overrides;
failures exit nonzero after printing a machine-readable JSON error record.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .discrete import FBetaParams
from .estimators import LabeledDataset
from .harness import (ExperimentConfig, emit_report, rate_result_record,
                      run_dkw_check, run_rate_experiment,
                      run_threshold_experiment)
from .oracle import randomized_identity_suite
from .plugin import (PluginClassifier, UnlabeledDataset, predictions_to_csv,
                     train_plugin)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fscore",
        description="F_b-optimal plug-in classification: experiments and "
                    "model training")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, doc in (("rate", "excess-score convergence experiment"),
                      ("threshold", "threshold-error convergence experiment")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--n-grid", help="comma-separated labeled sample sizes")
        p.add_argument("--reps", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--family",
                       help="smooth | constant | two_point | hard")
        p.add_argument("--estimator", help="kernel | knn | local_poly, or a "
                                           "JSON object with hyperparameters")
        p.add_argument("--b", type=float)
        p.add_argument("--n-rule", help='"n", "n2" or a fixed integer')
        p.add_argument("--workers", type=int)
        p.add_argument("--format", default="csv",
                       choices=["csv", "json", "svg-plot"])
        p.add_argument("--out", default="reports")

    p = sub.add_parser("dkw", help="sup-CDF concentration check")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--n-values", default="100,1000,10000")
    p.add_argument("--t-values", default="0.01,0.05,0.1")
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out", default="reports")

    p = sub.add_parser("oracle-suite", help="randomized exact-solver "
                                            "cross-checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="oracle_failures",
                   help="directory for failing-instance artifacts")

    p = sub.add_parser("train", help="fit a plug-in classifier from CSV data")
    p.add_argument("--labeled", required=True, help="CSV with x_1..x_d,y")
    p.add_argument("--unlabeled", help="CSV with x_1..x_d (optional; the "
                                       "labeled features are reused if absent)")
    p.add_argument("--estimator", default="kernel")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--out", required=True, help="model file prefix")

    p = sub.add_parser("predict", help="apply a saved classifier to points")
    p.add_argument("--model", required=True, help="model file prefix")
    p.add_argument("--points", required=True, help="CSV with x_1..x_d")
    p.add_argument("--out", required=True, help="output predictions CSV")
    return parser


def _load_config(path) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _parse_estimator(raw) -> dict:
    if raw is None:
        return {"method": "kernel"}
    if isinstance(raw, dict):
        return raw
    raw = raw.strip()
    if raw.startswith("{"):
        return json.loads(raw)
    return {"method": raw}


def _int_list(raw) -> list:
    if isinstance(raw, str):
        return [int(tok) for tok in raw.split(",") if tok.strip()]
    return [int(v) for v in raw]


def _float_list(raw) -> list:
    if isinstance(raw, str):
        return [float(tok) for tok in raw.split(",") if tok.strip()]
    return [float(v) for v in raw]


def _experiment_config(args) -> ExperimentConfig:
    cfg = _load_config(args.config)
    if args.n_grid is not None:
        cfg["n_grid"] = _int_list(args.n_grid)
    if args.reps is not None:
        cfg["reps"] = args.reps
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.family is not None:
        cfg["family"] = args.family
    if args.estimator is not None:
        cfg["estimator"] = _parse_estimator(args.estimator)
    elif "estimator" in cfg:
        cfg["estimator"] = _parse_estimator(cfg["estimator"])
    if args.b is not None:
        cfg["b"] = args.b
    if args.n_rule is not None:
        cfg["n_rule"] = args.n_rule if args.n_rule in ("n", "n2") \
            else int(args.n_rule)
    if args.workers is not None:
        cfg["workers"] = args.workers
    if "n_grid" in cfg:
        cfg["n_grid"] = tuple(cfg["n_grid"])
    return ExperimentConfig(**cfg)


def _run(args) -> int:
    if args.command in ("rate", "threshold"):
        cfg = _experiment_config(args)
        runner = run_rate_experiment if args.command == "rate" \
            else run_threshold_experiment
        result = runner(cfg)
        paths = emit_report(result, args.format, args.out)
        summary = rate_result_record(result)
        summary["written"] = paths
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0
    if args.command == "dkw":
        cfg = _load_config(args.config)
        n_values = _int_list(cfg.get("n_values", args.n_values))
        t_values = _float_list(cfg.get("t_values", args.t_values))
        reps = int(cfg.get("reps", args.reps))
        seed = int(cfg.get("seed", args.seed))
        rows = run_dkw_check(n_values, t_values, reps, seed=seed)
        paths = emit_report(rows, args.format, args.out, stem="dkw")
        print(json.dumps({"rows": rows, "written": paths}, indent=2,
                         sort_keys=True))
        return 0
    if args.command == "oracle-suite":
        report = randomized_identity_suite(args.trials, seed=args.seed,
                                           out_dir=args.out,
                                           raise_on_failure=False)
        print(json.dumps({
            "trials": report.trials,
            "passes_optimality": report.passes_optimality,
            "passes_excess_identity": report.passes_excess_identity,
            "passes_threshold_convergence": report.passes_threshold_convergence,
            "median_error_small": report.median_error_small,
            "median_error_large": report.median_error_large,
            "failures": len(report.failures),
            "ok": report.ok,
        }, indent=2, sort_keys=True))
        return 0 if report.ok else 1
    if args.command == "train":
        labeled = LabeledDataset.from_csv(args.labeled)
        if args.unlabeled:
            unlabeled = UnlabeledDataset.from_csv(args.unlabeled)
        else:
            unlabeled = UnlabeledDataset(points=labeled.points)
        clf = train_plugin(labeled, unlabeled, _parse_estimator(args.estimator),
                           FBetaParams(b=args.b))
        clf.save(args.out)
        print(json.dumps({"theta_hat": clf.theta_hat,
                          "provenance": clf.provenance,
                          "model": args.out}, indent=2, sort_keys=True))
        return 0
    if args.command == "predict":
        clf = PluginClassifier.load(args.model)
        points = UnlabeledDataset.from_csv(args.points)
        bits = clf.predict(points.points)
        predictions_to_csv(args.out, points.points, np.asarray(bits))
        print(json.dumps({"n": points.n,
                          "positives": int(np.asarray(bits).sum()),
                          "out": args.out}, indent=2, sort_keys=True))
        return 0
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except Exception as exc:  # noqa: BLE001 - the CLI contract is a JSON
        record = {"error": type(exc).__name__, "message": str(exc),
                  "command": args.command}  # record on any failure
        print(json.dumps(record, indent=2, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
