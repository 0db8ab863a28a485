"""Approximate Tukey depth geometry over axis-aligned halfspaces.

A set of m models in R^d is summarized by a d x m matrix S whose rows are the
sorted per-coordinate projections. The region of approximate depth >= i is the
hyperrectangle with sides [S[j, i-1], S[j, m-i]] (0-based columns), so its
volume is a product of order-statistic differences, kept in log space.
"""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedDimensionError
from .noise import RngHandle


def sorted_projections(models: np.ndarray) -> np.ndarray:
    """Sorts each coordinate of the models: row j holds the j-th coordinates ascending."""
    models = np.asarray(models, dtype=float)
    return np.sort(models.T, axis=1)


def perturb_models(models: np.ndarray, rng: RngHandle) -> np.ndarray:
    """Adds tiny one-sided uniform noise per coordinate to break ties.

    The noise for coordinate j is uniform on (0, eta_j) with
    eta_j = 1e-6 * max(spread_j, 1e-6), so the geometry is preserved across
    wildly different coefficient magnitudes while zero-volume regions become
    measure-zero events.
    """
    models = np.asarray(models, dtype=float)
    spread = models.max(axis=0) - models.min(axis=0)
    eta = 1e-6 * np.maximum(spread, 1e-6)
    return models + eta * rng.uniform(size=models.shape)


def max_depth(m: int) -> int:
    """The largest depth with a (possibly empty) region: M = floor(m / 2)."""
    return m // 2


def log_volume_at(log_v: np.ndarray, i: int) -> float:
    """log V_i with the conventions V_0 = +inf and V_{i > M} = 0."""
    if i <= 0:
        return np.inf
    if i > len(log_v):
        return -np.inf
    return float(log_v[i - 1])


def compute_log_volumes(S: np.ndarray) -> np.ndarray:
    """log volumes of the depth >= i regions for i = 1 .. floor(m/2).

    Entry i-1 is sum_j log(S[j, m-i] - S[j, i-1]); a zero side length yields
    -inf. The sequence is nonincreasing.
    """
    d, m = S.shape
    M = max_depth(m)
    if M == 0:
        return np.empty(0)
    lo = np.arange(M)
    hi = m - 1 - lo
    sides = S[:, hi] - S[:, lo]
    with np.errstate(divide="ignore"):
        return np.sum(np.log(sides), axis=0)


def approx_tukey_depth(point: np.ndarray, S: np.ndarray) -> int:
    """Depth of a point over the 2d axis-aligned closed halfspaces.

    Per dimension, counts models on each side by binary search and takes the
    minimum of the two counts; the result is the minimum over dimensions.
    """
    point = np.asarray(point, dtype=float)
    d, m = S.shape
    depth = m
    for j in range(d):
        at_most = int(np.searchsorted(S[j], point[j], side="right"))
        at_least = m - int(np.searchsorted(S[j], point[j], side="left"))
        depth = min(depth, at_most, at_least)
    return depth


def exact_tukey_depth_2d(point: np.ndarray, models: np.ndarray) -> int:
    """Exact halfspace depth in the plane; brute force over candidate directions.

    The minimizing closed halfplane can be rotated until its boundary passes
    through some model, so it suffices to check directions perpendicular to
    each (model - point) vector, nudged to both sides, together with the
    directions themselves. Exact for points in general position.
    """
    point = np.asarray(point, dtype=float)
    models = np.asarray(models, dtype=float)
    if models.ndim != 2 or models.shape[1] != 2 or point.shape != (2,):
        raise UnsupportedDimensionError("exact depth oracle requires d = 2")
    diffs = models - point
    norms = np.hypot(diffs[:, 0], diffs[:, 1])
    coincident = int(np.sum(norms == 0))
    offset = diffs[norms > 0]
    if len(offset) == 0:
        return coincident
    base = np.arctan2(offset[:, 1], offset[:, 0])
    nudge = 1e-9
    candidates = np.concatenate(
        [base + shift for shift in (0.0, np.pi / 2, -np.pi / 2, np.pi)]
        + [base + shift + nudge for shift in (np.pi / 2, -np.pi / 2)]
        + [base + shift - nudge for shift in (np.pi / 2, -np.pi / 2)]
    )
    directions = np.stack([np.cos(candidates), np.sin(candidates)], axis=1)
    # counts of models in each closed halfplane {x : <v, x - point> >= 0}
    dots = directions @ offset.T
    counts = np.sum(dots >= 0, axis=1)
    return int(counts.min()) + coincident
