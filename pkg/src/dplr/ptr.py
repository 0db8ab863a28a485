"""Propose-test-release gate for the depth-restricted exponential mechanism.

The gate computes a 1-sensitive lower bound k on the Hamming distance between
the current model set and any unsafe one, adds Laplace(1/epsilon) noise, and
compares against ln(1/(2 delta)) / epsilon. All logarithms are natural.
"""

from __future__ import annotations

import numpy as np

from .depth import log_volume_at
from .errors import ParameterError
from .noise import RngHandle, laplace


def _condition_holds(log_v: np.ndarray, t: int, k: int, epsilon: float, log_delta: float) -> bool:
    """True if some integer g >= 1 satisfies V_{t-k-1}/V_{t+k+g+1} * e^{-eps*g/2} <= delta."""
    num = log_volume_at(log_v, t - k - 1)
    if num == -np.inf:
        # zero numerator: the ratio is 0 (or 0/0, which also counts as satisfied)
        return True
    if num == np.inf:
        return False
    M = len(log_v)
    # beyond index M the denominator is 0 and the ratio infinite, so only
    # g with t + k + g + 1 <= M can satisfy the inequality
    g_max = M - t - k - 1
    if g_max < 1:
        return False
    g = np.arange(1, g_max + 1)
    den = log_v[t + k + g]  # 0-based entry of V_{t+k+g+1}
    lhs = num - den - epsilon * g / 2.0
    return bool(np.any(lhs <= log_delta))


def distance_lower_bound(log_v: np.ndarray, t: int, epsilon: float, delta: float) -> int:
    """Largest k in {0, ..., t-1} passing the volume-ratio condition, else -1.

    Binary search over k; the condition is monotone in k (if it holds for k it
    holds for every smaller k), with an inner exhaustive scan over the gap g.
    """
    log_v = np.asarray(log_v, dtype=float)
    M = len(log_v)
    if not 1 <= t <= M:
        raise ParameterError(f"t must be in [1, {M}], got {t}")
    if epsilon <= 0 or not 0 < delta < 1:
        raise ParameterError("need epsilon > 0 and 0 < delta < 1")
    log_delta = np.log(delta)
    if not _condition_holds(log_v, t, 0, epsilon, log_delta):
        return -1
    lo, hi = 0, t - 1  # condition holds at lo; hi may fail
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _condition_holds(log_v, t, mid, epsilon, log_delta):
            lo = mid
        else:
            hi = mid - 1
    return lo


def distance_lower_bound_exhaustive(log_v: np.ndarray, t: int, epsilon: float, delta: float) -> int:
    """O(M^2) reference scan over all (k, g) pairs; test oracle for the binary search."""
    log_v = np.asarray(log_v, dtype=float)
    if not 1 <= t <= len(log_v):
        raise ParameterError(f"t must be in [1, {len(log_v)}], got {t}")
    log_delta = np.log(delta)
    best = -1
    for k in range(t):
        if _condition_holds(log_v, t, k, epsilon, log_delta):
            best = k
    return best


def ptr_threshold(epsilon: float, delta: float) -> float:
    """Pass threshold ln(1/(2 delta)) / epsilon for the noisy distance bound."""
    return np.log(1.0 / (2.0 * delta)) / epsilon


def ptr_check(
    log_v: np.ndarray,
    epsilon: float,
    delta: float,
    rng: RngHandle,
    noise_override: float | None = None,
) -> bool:
    """Noisy threshold test on the distance lower bound.

    The bound is computed at t = floor(M / 2) with the failure probability
    adjusted to delta / (8 e^epsilon). ``noise_override`` substitutes a fixed
    value for the Laplace draw; it exists for deterministic tests only.
    """
    if epsilon <= 0 or not 0 < delta < 1:
        raise ParameterError("need epsilon > 0 and 0 < delta < 1")
    t = len(log_v) // 2
    k = distance_lower_bound(log_v, t, epsilon, delta / (8.0 * np.exp(epsilon)))
    noise = laplace(1.0 / epsilon, rng) if noise_override is None else noise_override
    return bool(k + noise >= ptr_threshold(epsilon, delta))
