"""Command line interface: one-shot fits, multi-trial experiments, gate sweeps.

Exit codes: 0 on success (a gate failure is a valid in-band outcome), 1 for
usage errors, 2 for ingestion errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import IngestionError, ParameterError
from .harness import (
    ExperimentConfig,
    emit_report,
    load_csv,
    run_experiment,
    sweep_heuristic,
    write_sweep_csv,
    _load_config_dataset,
)
from .mechanism import PrivacyBudget, heuristic_num_models, tukey_em
from .noise import make_rng
from .regression import SyntheticSpec, partition_fit, r_squared

EXIT_USAGE = 1
EXIT_INGESTION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _parse_synthetic(text: str) -> SyntheticSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ParameterError(f"--synthetic expects n,d,sigma, got {text!r}")
    return SyntheticSpec(n=int(parts[0]), d_features=int(parts[1]), noise_sigma=float(parts[2]))


def _add_data_args(parser):
    parser.add_argument("--input", help="CSV dataset path")
    parser.add_argument("--label-col", help="name of the label column")
    parser.add_argument("--synthetic", help="synthetic dataset as n,d,sigma")
    parser.add_argument("--no-intercept", action="store_true", help="skip the intercept column")


def _add_privacy_args(parser):
    parser.add_argument("--epsilon", type=float, default=float(np.log(3)))
    parser.add_argument("--delta", type=float, default=1e-5)
    parser.add_argument("--models", type=int, default=None, help="number of partition models m")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="dplr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="run one mechanism invocation")
    _add_data_args(fit)
    _add_privacy_args(fit)
    fit.add_argument("--method", choices=("tukey_em", "ssp", "non_dp"), default="tukey_em")
    fit.add_argument("--out-dir", default=None, help="optional directory for result.json")

    exp = sub.add_parser("experiment", help="run a multi-trial experiment")
    _add_data_args(exp)
    _add_privacy_args(exp)
    exp.add_argument("--method", choices=("tukey_em", "ssp", "non_dp"), default="tukey_em")
    exp.add_argument("--trials", type=int, default=10)
    exp.add_argument("--format", choices=("json", "csv"), default="json")
    exp.add_argument("--histograms", action="store_true", help="emit model-coefficient histograms")
    exp.add_argument("--out-dir", default="dplr-out")

    sweep = sub.add_parser("sweep", help="tabulate gate outcomes over (d, m) grids")
    sweep.add_argument("--d-list", default="5,10,15,20,25,30,35,40,45,50")
    sweep.add_argument("--m-list", default="250,500,750,1000,1250,1500,1750,2000")
    sweep.add_argument("--epsilon", type=float, default=float(np.log(3)))
    sweep.add_argument("--delta", type=float, default=1e-5)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out-dir", default="dplr-out")
    return parser


def _config_from_args(args, method: str, trials: int) -> ExperimentConfig:
    if (args.input is None) == (args.synthetic is None):
        raise ParameterError("provide exactly one of --input or --synthetic")
    synthetic = _parse_synthetic(args.synthetic) if args.synthetic else None
    return ExperimentConfig(
        method=method,
        epsilon=args.epsilon,
        delta=args.delta,
        trials=trials,
        seed=args.seed,
        m=args.models,
        add_intercept=not args.no_intercept,
        csv_path=args.input,
        label_column=args.label_col,
        synthetic=synthetic,
    )


def _run_fit(args) -> int:
    config = _config_from_args(args, args.method, trials=1)
    data = _load_config_dataset(config)
    rng = make_rng(args.seed)
    result: dict = {"method": args.method}
    if args.method == "tukey_em":
        m = args.models or heuristic_num_models(data.n, data.d)
        outcome = tukey_em(data, m, PrivacyBudget(args.epsilon, args.delta), rng)
        result["m"] = m
        if outcome.failed:
            result["outcome"] = "bottom"
        else:
            result["outcome"] = "model"
            result["coefficients"] = outcome.coefficients.tolist()
            result["r_squared"] = r_squared(outcome.coefficients, data)
    else:
        from . import baselines

        if args.method == "ssp":
            beta = baselines.ssp_regression(
                data,
                PrivacyBudget(args.epsilon, args.delta),
                baselines.DataBounds.from_data(data),
                rng,
            )
        else:
            beta = baselines.non_dp_baseline(data)
        result["outcome"] = "model"
        result["coefficients"] = beta.tolist()
        result["r_squared"] = r_squared(beta, data)
    text = json.dumps(result, indent=2)
    print(text)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "result.json").write_text(text + "\n", encoding="utf-8")
    return 0


def _run_experiment(args) -> int:
    config = _config_from_args(args, args.method, trials=args.trials)
    data = _load_config_dataset(config)
    report = run_experiment(config, dataset=data)
    histogram_models = None
    if args.histograms:
        m = report.config["m"] or heuristic_num_models(data.n, data.d)
        histogram_models = partition_fit(data, m, make_rng(args.seed))
    written = emit_report(report, args.out_dir, args.format, histogram_models)
    agg = report.aggregates
    print(
        f"{config.method}: {agg['passes']}/{agg['trials']} trials passed, "
        f"median R^2 = {agg['median_r_squared']}"
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def _run_sweep(args) -> int:
    d_list = [int(v) for v in args.d_list.split(",")]
    m_list = [int(v) for v in args.m_list.split(",")]
    rows = sweep_heuristic(d_list, m_list, PrivacyBudget(args.epsilon, args.delta), args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    write_sweep_csv(rows, path)
    passed = sum(r["passes"] for r in rows)
    print(f"{passed}/{len(rows)} (d, m) cells cross the gate threshold")
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _run_fit(args)
        if args.command == "experiment":
            return _run_experiment(args)
        return _run_sweep(args)
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGESTION
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
