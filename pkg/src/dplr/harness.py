"""Experiment runner: dataset ingestion, multi-trial execution, reporting.

R^2 is evaluated in-sample on the full training dataset. Failed (gate-rejected)
trials are excluded from the R^2 aggregates but counted in the pass rate.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines, depth, ptr, regression
from .errors import (
    BoundsViolationError,
    DegenerateRegionError,
    IngestionError,
    InsufficientDataError,
    ParameterError,
    UndefinedScoreError,
)
from .mechanism import PrivacyBudget, heuristic_num_models, tukey_em
from .noise import make_rng
from .regression import Dataset, SyntheticSpec, generate_synthetic, r_squared

METHODS = ("tukey_em", "ssp", "non_dp")


def add_intercept_column(data: Dataset) -> Dataset:
    ones = np.ones((data.n, 1))
    return Dataset(np.hstack([data.features, ones]), data.labels)


def load_csv(path, label_column: str, add_intercept: bool = True) -> Dataset:
    """Reads a numeric CSV with header into a Dataset.

    The label column is extracted; the remaining columns form the features,
    with a constant-1 column appended when ``add_intercept``.
    """
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"{path}: file does not exist")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: file is empty") from None
        if label_column not in header:
            raise IngestionError(f"{path}: no column named {label_column!r} in header")
        label_idx = header.index(label_column)
        rows = []
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestionError(
                    f"{path}: row {row_num} has {len(row)} cells, expected {len(header)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                bad = next(c for c in row if not _is_float(c))
                raise IngestionError(
                    f"{path}: row {row_num} has non-numeric cell {bad!r}"
                ) from None
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    matrix = np.asarray(rows)
    labels = matrix[:, label_idx]
    features = np.delete(matrix, label_idx, axis=1)
    data = Dataset(features, labels)
    return add_intercept_column(data) if add_intercept else data


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_dataset_csv(data: Dataset, path, label_column: str = "label") -> None:
    """Writes a Dataset back out as a headered CSV (label column last)."""
    path = Path(path)
    header = [f"x{j}" for j in range(data.d)] + [label_column]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row, label in zip(data.features, data.labels):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(label))])


@dataclass(frozen=True)
class ExperimentConfig:
    method: str
    epsilon: float
    delta: float
    trials: int = 10
    seed: int = 0
    m: int | None = None
    add_intercept: bool = True
    csv_path: str | None = None
    label_column: str | None = None
    synthetic: SyntheticSpec | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        has_csv = self.csv_path is not None
        has_synth = self.synthetic is not None
        if has_csv == has_synth:
            raise ParameterError("exactly one of csv_path or synthetic must be set")
        if has_csv and self.label_column is None:
            raise ParameterError("csv_path requires label_column")

    def echo(self) -> dict:
        out = {
            "method": self.method,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "trials": self.trials,
            "seed": self.seed,
            "m": self.m,
            "add_intercept": self.add_intercept,
        }
        if self.csv_path is not None:
            out["csv_path"] = str(self.csv_path)
            out["label_column"] = self.label_column
        else:
            out["synthetic"] = {
                "n": self.synthetic.n,
                "d_features": self.synthetic.d_features,
                "noise_sigma": self.synthetic.noise_sigma,
                "coefficient_scale": self.synthetic.coefficient_scale,
            }
        return out


@dataclass
class ExperimentReport:
    config: dict
    trials: list
    aggregates: dict
    stage_seconds: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "trials": self.trials,
            "aggregates": self.aggregates,
            "stage_seconds": self.stage_seconds,
        }


def _load_config_dataset(config: ExperimentConfig) -> Dataset:
    if config.csv_path is not None:
        return load_csv(config.csv_path, config.label_column, config.add_intercept)
    rng = make_rng(config.seed)
    data, _ = generate_synthetic(config.synthetic, rng)
    return add_intercept_column(data) if config.add_intercept else data


def _aggregate(trial_rows: list) -> dict:
    scores = [t["r_squared"] for t in trial_rows if t["passed"]]
    agg = {
        "trials": len(trial_rows),
        "passes": sum(t["passed"] for t in trial_rows),
        "pass_rate": sum(t["passed"] for t in trial_rows) / len(trial_rows),
    }
    if scores:
        agg["median_r_squared"] = float(np.median(scores))
        agg["q1_r_squared"] = float(np.percentile(scores, 25))
        agg["q3_r_squared"] = float(np.percentile(scores, 75))
    else:
        agg["median_r_squared"] = None
        agg["q1_r_squared"] = None
        agg["q3_r_squared"] = None
    return agg


def run_experiment(config: ExperimentConfig, dataset: Dataset | None = None) -> ExperimentReport:
    """Executes the configured method ``trials`` times and aggregates R^2."""
    data = dataset if dataset is not None else _load_config_dataset(config)
    budget = PrivacyBudget(config.epsilon, config.delta)
    m = config.m
    if m is None and config.method == "tukey_em":
        m = heuristic_num_models(data.n, data.d)
    trial_seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(config.seed).spawn(config.trials)]

    trial_rows = []
    stage_totals: dict = {}
    for trial, trial_seed in enumerate(trial_seeds):
        rng = make_rng(trial_seed)
        row = {"trial": trial, "seed": trial_seed}
        start = time.perf_counter()
        try:
            if config.method == "tukey_em":
                result = tukey_em(data, m, budget, rng)
                row["passed"] = not result.failed
                row["r_squared"] = (
                    None if result.failed else r_squared(result.coefficients, data)
                )
                for stage, seconds in result.stage_seconds.items():
                    stage_totals[stage] = stage_totals.get(stage, 0.0) + seconds
            elif config.method == "ssp":
                bounds = baselines.DataBounds.from_data(data)
                beta = baselines.ssp_regression(data, budget, bounds, rng)
                row["passed"] = True
                row["r_squared"] = r_squared(beta, data)
            else:
                beta = baselines.non_dp_baseline(data)
                row["passed"] = True
                row["r_squared"] = r_squared(beta, data)
        except (
            ParameterError,
            InsufficientDataError,
            DegenerateRegionError,
            BoundsViolationError,
            UndefinedScoreError,
        ) as exc:
            row["passed"] = False
            row["r_squared"] = None
            row["error"] = str(exc)
        row["seconds"] = time.perf_counter() - start
        trial_rows.append(row)

    config_echo = config.echo()
    config_echo["m"] = m
    return ExperimentReport(
        config=config_echo,
        trials=trial_rows,
        aggregates=_aggregate(trial_rows),
        stage_seconds=stage_totals,
    )


def sweep_heuristic(d_list, m_list, budget: PrivacyBudget, seed: int) -> list:
    """Noiseless gate outcomes for synthetic data with n = (d+1) * m per cell.

    Each model trains on exactly d+1 rows (d features plus intercept), the
    minimal identifiable size. Rows hold the distance lower bound and whether
    it crosses the gate threshold deterministically. The full budget epsilon
    feeds the bound here (the diagnostic asks whether the gate statistic is
    in range at the stated privacy level, not how the end-to-end mechanism
    splits its budget).
    """
    eps_ptr = budget.epsilon
    threshold = ptr.ptr_threshold(eps_ptr, budget.delta)
    rows = []
    for d in d_list:
        for m in m_list:
            rng = np.random.default_rng(np.random.SeedSequence([seed, d, m]))
            spec = SyntheticSpec(n=(d + 1) * m, d_features=d, noise_sigma=10.0)
            data, _ = generate_synthetic(spec, rng)
            data = add_intercept_column(data)
            models = regression.partition_fit(data, m, rng)
            S = depth.sorted_projections(depth.perturb_models(models, rng))
            log_v = depth.compute_log_volumes(S)
            t = len(log_v) // 2
            bound = ptr.distance_lower_bound(
                log_v, t, eps_ptr, budget.delta / (8.0 * np.exp(eps_ptr))
            )
            rows.append(
                {
                    "d": d,
                    "m": m,
                    "n": (d + 1) * m,
                    "distance_bound": bound,
                    "threshold": threshold,
                    "passes": bound >= threshold,
                }
            )
    return rows


def build_model_histograms(models: np.ndarray, bins: int = 20) -> list:
    """Per-coefficient histogram rows with a matched-moment Gaussian reference.

    For each coefficient, bins the m model values and evaluates a Gaussian
    density with the coefficient's sample mean/std at the bin centers, scaled
    to expected counts. Returns bins * d rows.
    """
    models = np.asarray(models, dtype=float)
    m, d = models.shape
    rows = []
    for j in range(d):
        values = models[:, j]
        mean = float(values.mean())
        std = float(values.std())
        counts, edges = np.histogram(values, bins=bins)
        width = edges[1] - edges[0]
        centers = (edges[:-1] + edges[1:]) / 2.0
        if std > 0:
            density = np.exp(-((centers - mean) ** 2) / (2 * std**2)) / (
                std * np.sqrt(2 * np.pi)
            )
        else:
            density = np.zeros_like(centers)
        reference = m * width * density
        for b in range(bins):
            rows.append(
                {
                    "coefficient": j,
                    "bin_left": float(edges[b]),
                    "bin_right": float(edges[b + 1]),
                    "count": int(counts[b]),
                    "gaussian_reference": float(reference[b]),
                    "coef_mean": mean,
                    "coef_std": std,
                }
            )
    return rows


def emit_report(
    report: ExperimentReport,
    out_dir,
    fmt: str = "json",
    histogram_models: np.ndarray | None = None,
    render_figures: bool = True,
) -> list:
    """Writes the report (and optional model histograms) into ``out_dir``.

    ``fmt`` selects json or csv for the trial table; histogram data is always
    plot-ready CSV, with a rendered figure alongside when ``render_figures``.
    Returns the list of written paths.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        if fmt == "json":
            path = out_dir / "report.json"
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(report.to_json_dict(), fh, indent=2)
                fh.write("\n")
            written.append(path)
        elif fmt == "csv":
            path = out_dir / "report.csv"
            fields = ["trial", "seed", "passed", "r_squared", "seconds"]
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
                writer.writeheader()
                writer.writerows(report.trials)
            written.append(path)
            summary = out_dir / "report_summary.csv"
            with open(summary, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=list(report.aggregates))
                writer.writeheader()
                writer.writerow(report.aggregates)
            written.append(summary)
        else:
            raise ParameterError(f"format must be json or csv, got {fmt!r}")

        if histogram_models is not None:
            hist_rows = build_model_histograms(histogram_models)
            hist_path = out_dir / "model_histograms.csv"
            with open(hist_path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=list(hist_rows[0]))
                writer.writeheader()
                writer.writerows(hist_rows)
            written.append(hist_path)
            if render_figures:
                from .plots import render_model_histograms

                written.append(
                    render_model_histograms(hist_rows, out_dir / "model_histograms.png")
                )
        if render_figures and any(t["passed"] for t in report.trials):
            from .plots import render_trial_scores

            written.append(render_trial_scores(report, out_dir / "trial_r_squared.png"))
        return written
    except OSError as exc:
        raise OSError(f"failed writing report under {out_dir}: {exc}") from exc


def write_sweep_csv(rows: list, path) -> None:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
