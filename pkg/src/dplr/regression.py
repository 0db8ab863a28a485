"""Plain OLS fitting, data partitioning, scoring, and synthetic data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, ParameterError, UndefinedScoreError
from .noise import RngHandle


@dataclass(frozen=True)
class Dataset:
    """A feature matrix (n x d) and a label vector (length n)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=float)
        if features.ndim != 2 or labels.ndim != 1:
            raise ParameterError("features must be 2-D and labels 1-D")
        if features.shape[0] != labels.shape[0]:
            raise ParameterError(
                f"row mismatch: {features.shape[0]} feature rows vs "
                f"{labels.shape[0]} labels"
            )
        if features.shape[0] < 1 or features.shape[1] < 1:
            raise ParameterError("dataset must have at least one row and column")
        if not (np.isfinite(features).all() and np.isfinite(labels).all()):
            raise ParameterError("dataset contains non-finite entries")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the synthetic regression generator."""

    n: int
    d_features: int
    noise_sigma: float = 10.0
    coefficient_scale: float = 100.0

    def __post_init__(self):
        if self.n < self.d_features + 1:
            raise ParameterError("need n >= d_features + 1")
        if self.noise_sigma < 0 or self.coefficient_scale <= 0:
            raise ParameterError("noise_sigma must be >= 0, coefficient_scale > 0")


def fit_ols(data: Dataset) -> np.ndarray:
    """Least-squares fit; minimal-norm solution when X^T X is rank-deficient."""
    beta, _, _, _ = np.linalg.lstsq(data.features, data.labels, rcond=None)
    return beta


def partition_fit(data: Dataset, m: int, rng: RngHandle) -> np.ndarray:
    """Randomly partitions the rows into m near-even groups and fits OLS per group.

    The first (n mod m) groups receive one extra row. Returns an (m x d) array
    of coefficient vectors in partition order.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if data.n // m < data.d:
        raise InsufficientDataError(
            f"each of the {m} partitions would hold {data.n // m} rows, "
            f"fewer than d={data.d}"
        )
    order = rng.permutation(data.n)
    base, extra = divmod(data.n, m)
    models = np.empty((m, data.d))
    start = 0
    for i in range(m):
        size = base + (1 if i < extra else 0)
        rows = order[start : start + size]
        start += size
        models[i] = fit_ols(Dataset(data.features[rows], data.labels[rows]))
    return models


def r_squared(beta: np.ndarray, data: Dataset) -> float:
    """Coefficient of determination 1 - SSE/SST; may be negative."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.d,):
        raise ParameterError(f"beta has shape {beta.shape}, expected ({data.d},)")
    residual = data.features @ beta - data.labels
    sst = float(np.sum((data.labels - data.labels.mean()) ** 2))
    if sst == 0.0:
        raise UndefinedScoreError("labels are constant; R^2 is undefined")
    return 1.0 - float(np.sum(residual**2)) / sst


def generate_synthetic(spec: SyntheticSpec, rng: RngHandle):
    """Draws standard-normal features, normal coefficients, and noisy labels.

    Returns (Dataset, true coefficient vector). No intercept column is added;
    the harness appends one.
    """
    features = rng.standard_normal((spec.n, spec.d_features))
    beta = spec.coefficient_scale * rng.standard_normal(spec.d_features)
    labels = features @ beta
    if spec.noise_sigma > 0:
        labels = labels + spec.noise_sigma * rng.standard_normal(spec.n)
    return Dataset(features, labels), beta
