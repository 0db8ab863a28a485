"""Depth-restricted exponential mechanism: sample a depth, then a point.

Depth i is drawn with probability proportional to W_i * exp(epsilon * i),
where W_i = V_i - V_{i+1} is the volume of the region of depth exactly i; the
factor-2 in the standard exponential mechanism is dropped because depth is a
monotonic utility. A uniform point of that exact depth is then drawn through
a per-dimension partition of the region into hyperrectangle pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .depth import log_volume_at, max_depth
from .errors import DegenerateRegionError, ParameterError
from .noise import RngHandle, log_sum_exp, sample_log_categorical


def _log_diff_exp(log_a: float, log_b: float) -> float:
    """log(e^a - e^b) for a >= b; -inf when the difference cancels to zero."""
    if log_a == -np.inf:
        return -np.inf
    if log_b == -np.inf:
        return log_a
    diff = log_b - log_a
    if diff >= 0.0:
        return -np.inf
    return log_a + np.log1p(-np.exp(diff))


@dataclass(frozen=True)
class DepthDistribution:
    """Log weights log(W_i) + epsilon * i over depths i = t .. M."""

    t: int
    log_weights: np.ndarray

    @property
    def depths(self) -> np.ndarray:
        return np.arange(self.t, self.t + len(self.log_weights))

    def probabilities(self) -> np.ndarray:
        total = log_sum_exp(self.log_weights)
        return np.exp(self.log_weights - total)


def depth_weights(log_v: np.ndarray, t: int, epsilon: float) -> DepthDistribution:
    """Builds the restricted exponential-mechanism distribution over depths.

    W_i = V_i - V_{i+1} with V_{M+1} = 0, computed in log space; near-equal
    volumes may cancel to a zero weight, which is acceptable as long as some
    depth retains positive weight.
    """
    log_v = np.asarray(log_v, dtype=float)
    M = len(log_v)
    if not 1 <= t <= M:
        raise ParameterError(f"t must be in [1, {M}], got {t}")
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    weights = np.empty(M - t + 1)
    for idx, i in enumerate(range(t, M + 1)):
        log_w = _log_diff_exp(log_volume_at(log_v, i), log_volume_at(log_v, i + 1))
        weights[idx] = log_w + epsilon * i
    if not np.any(weights > -np.inf):
        raise DegenerateRegionError("all depth regions in [t, M] have zero volume")
    return DepthDistribution(t=t, log_weights=weights)


def sample_depth(dist: DepthDistribution, rng: RngHandle) -> int:
    """Draws a depth from the distribution."""
    return dist.t + sample_log_categorical(dist.log_weights, rng)


def _side_interval(row: np.ndarray, i: int):
    """Endpoints [S_{j,i}, S_{j,m-(i-1)}] (1-based) of the depth >= i slab in one dimension."""
    m = len(row)
    if i < 1 or i > m - i + 1:
        return 0.0, 0.0
    return float(row[i - 1]), float(row[m - i])


def _side_length(row: np.ndarray, i: int) -> float:
    lo, hi = _side_interval(row, i)
    return max(hi - lo, 0.0)


@dataclass(frozen=True)
class RegionPartition:
    """Per-dimension cell volumes for the region of depth exactly i.

    Cell j collects the points whose depth-i dimension of smallest index is j;
    its volume factorizes as V_{<j, i+1} * W_{j, i} * V_{>j, i}.
    """

    i: int
    log_v_j: np.ndarray  # side length of the depth >= i slab, per dimension
    log_w_j: np.ndarray  # length of the two depth-exactly-i intervals, per dimension
    log_cells: np.ndarray  # log vol(C_{j, i})

    def cell_probabilities(self) -> np.ndarray:
        total = log_sum_exp(self.log_cells)
        return np.exp(self.log_cells - total)


def region_partition(S: np.ndarray, i: int) -> RegionPartition:
    """Computes the cell volumes of the depth-exactly-i partition in O(d)."""
    d, m = S.shape
    if not 1 <= i <= max_depth(m):
        raise ParameterError(f"depth must be in [1, {max_depth(m)}], got {i}")
    v_i = np.array([_side_length(S[j], i) for j in range(d)])
    v_next = np.array([_side_length(S[j], i + 1) for j in range(d)])
    with np.errstate(divide="ignore"):
        log_v_j = np.log(v_i)
        log_v_next = np.log(v_next)
        log_w_j = np.log(np.maximum(v_i - v_next, 0.0))
    # prefix of log V_{j', i+1} over j' < j and suffix of log V_{j', i} over j' > j
    prefix = np.concatenate([[0.0], np.cumsum(log_v_next)[:-1]])
    suffix = np.concatenate([np.cumsum(log_v_j[::-1])[-2::-1], [0.0]])
    return RegionPartition(
        i=i, log_v_j=log_v_j, log_w_j=log_w_j, log_cells=prefix + log_w_j + suffix
    )


def sample_point_with_depth(S: np.ndarray, i: int, rng: RngHandle) -> np.ndarray:
    """Uniform sample from the region of approximate depth exactly i.

    Samples a cell proportional to its volume, then fills coordinates: before
    the cell dimension from the depth >= i+1 slab, the cell dimension from the
    two-interval set of exact depth i, and after it from the depth >= i slab.
    """
    d, m = S.shape
    part = region_partition(S, i)
    if not np.any(part.log_cells > -np.inf):
        raise DegenerateRegionError(f"region of depth exactly {i} has zero volume")
    j_star = sample_log_categorical(part.log_cells, rng)
    point = np.empty(d)
    for j in range(d):
        if j < j_star:
            lo, hi = _side_interval(S[j], i + 1)
            point[j] = rng.uniform(lo, hi)
        elif j > j_star:
            lo, hi = _side_interval(S[j], i)
            point[j] = rng.uniform(lo, hi)
        else:
            out_lo, out_hi = _side_interval(S[j], i)
            in_lo, in_hi = _side_interval(S[j], i + 1)
            if in_hi <= in_lo:
                # inner slab is empty: exact depth i spans the whole outer slab
                point[j] = rng.uniform(out_lo, out_hi)
                continue
            left = in_lo - out_lo
            right = out_hi - in_hi
            if rng.uniform(0.0, left + right) < left:
                point[j] = rng.uniform(out_lo, in_lo)  # [S_{j,i}, S_{j,i+1})
            else:
                point[j] = rng.uniform(in_hi, out_hi)  # (S_{j,m-i}, S_{j,m-(i-1)}]
    return point
