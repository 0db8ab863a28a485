"""Differentially private linear regression by private selection of a
high-depth model from many independent OLS fits."""

from .baselines import DataBounds, non_dp_baseline, ssp_regression
from .depth import (
    approx_tukey_depth,
    compute_log_volumes,
    exact_tukey_depth_2d,
    perturb_models,
    sorted_projections,
)
from .errors import (
    BoundsViolationError,
    DegenerateRegionError,
    IngestionError,
    InsufficientDataError,
    ParameterError,
    UndefinedScoreError,
    UnsupportedDimensionError,
)
from .harness import ExperimentConfig, ExperimentReport, load_csv, run_experiment, sweep_heuristic
from .mechanism import MechanismResult, PrivacyBudget, heuristic_num_models, tukey_em
from .noise import make_rng
from .ptr import distance_lower_bound, ptr_check
from .regression import Dataset, SyntheticSpec, fit_ols, generate_synthetic, partition_fit, r_squared
from .sampler import depth_weights, region_partition, sample_depth, sample_point_with_depth

__all__ = [
    "DataBounds",
    "Dataset",
    "ExperimentConfig",
    "ExperimentReport",
    "MechanismResult",
    "PrivacyBudget",
    "SyntheticSpec",
    "approx_tukey_depth",
    "compute_log_volumes",
    "depth_weights",
    "distance_lower_bound",
    "exact_tukey_depth_2d",
    "fit_ols",
    "generate_synthetic",
    "heuristic_num_models",
    "load_csv",
    "make_rng",
    "non_dp_baseline",
    "partition_fit",
    "perturb_models",
    "ptr_check",
    "r_squared",
    "region_partition",
    "run_experiment",
    "sample_depth",
    "sample_point_with_depth",
    "sorted_projections",
    "ssp_regression",
    "sweep_heuristic",
    "tukey_em",
]
