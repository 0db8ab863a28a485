"""Comparison estimators: non-private OLS and sufficient-statistics perturbation.

The SSP baseline follows the AdaSSP recipe: Gaussian noise on X^T X, X^T y,
and the minimum Gram eigenvalue, with a privately chosen ridge term and the
(epsilon, delta) budget split in thirds. The caller supplies row-norm bounds;
rows exceeding them are rejected, never clipped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundsViolationError, ParameterError
from .mechanism import PrivacyBudget
from .noise import RngHandle
from .regression import Dataset, fit_ols


@dataclass(frozen=True)
class DataBounds:
    """Per-row l2 bound on features and absolute bound on labels."""

    feature_norm_bound: float
    label_bound: float

    def __post_init__(self):
        if self.feature_norm_bound <= 0 or self.label_bound <= 0:
            raise ParameterError("bounds must be positive")

    @classmethod
    def from_data(cls, data: Dataset) -> "DataBounds":
        """Exact non-private bounds; mirrors the artificially strong baseline setup."""
        feature_norms = np.linalg.norm(data.features, axis=1)
        return cls(
            feature_norm_bound=max(float(feature_norms.max()), 1e-12),
            label_bound=max(float(np.abs(data.labels).max()), 1e-12),
        )


def symmetric_standard_normal(d: int, rng: RngHandle) -> np.ndarray:
    """Symmetric matrix with N(0,1) entries: upper triangle drawn, mirrored."""
    upper = np.triu(rng.standard_normal((d, d)))
    return upper + np.triu(upper, 1).T


def non_dp_baseline(data: Dataset) -> np.ndarray:
    """Ordinary least squares on the full dataset."""
    return fit_ols(data)


def ssp_regression(
    data: Dataset,
    budget: PrivacyBudget,
    bounds: DataBounds,
    rng: RngHandle,
    rho: float = 0.05,
    disable_noise: bool = False,
) -> np.ndarray:
    """DP OLS from noisy sufficient statistics with an adaptive ridge term.

    ``rho`` is the ridge-selection failure probability from the AdaSSP recipe.
    ``disable_noise`` zeroes all noise and the ridge term; it exists so tests
    can confirm agreement with plain OLS.
    """
    feature_norms = np.linalg.norm(data.features, axis=1)
    if np.any(feature_norms > bounds.feature_norm_bound * (1 + 1e-12)):
        raise BoundsViolationError("a feature row exceeds feature_norm_bound")
    if np.any(np.abs(data.labels) > bounds.label_bound * (1 + 1e-12)):
        raise BoundsViolationError("a label exceeds label_bound")

    X, y, d = data.features, data.labels, data.d
    xtx = X.T @ X
    xty = X.T @ y
    if disable_noise:
        return np.linalg.solve(xtx, xty)

    eps3 = budget.epsilon / 3.0
    sigma = np.sqrt(np.log(6.0 / budget.delta)) / eps3
    bx = bounds.feature_norm_bound
    by = bounds.label_bound

    # noisy minimum eigenvalue of the Gram matrix, shifted to a lower bound
    lambda_min = float(np.linalg.eigvalsh(xtx)[0])
    lambda_noisy = max(
        lambda_min + sigma * bx**2 * rng.standard_normal() - np.log(6.0 / budget.delta) / eps3 * bx**2,
        0.0,
    )
    ridge = max(
        0.0,
        np.sqrt(d * np.log(6.0 / budget.delta) * np.log(2.0 * d**2 / rho)) * bx**2 / eps3
        - lambda_noisy,
    )

    xtx_noisy = xtx + sigma * bx**2 * symmetric_standard_normal(d, rng)
    xty_noisy = xty + sigma * bx * by * rng.standard_normal(d)

    return np.linalg.solve(xtx_noisy + ridge * np.eye(d), xty_noisy)
