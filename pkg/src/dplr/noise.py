"""Random primitives shared by the privacy mechanisms.

All samplers take an explicit ``numpy.random.Generator`` so that a fixed seed
yields a bit-identical draw sequence. Categorical sampling is done entirely in
log space; products of up to ~50 interval lengths underflow or overflow
otherwise.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

RngHandle = np.random.Generator


def make_rng(seed: int) -> RngHandle:
    """Creates a reproducible RNG handle from a 64-bit seed."""
    return np.random.default_rng(seed)


def laplace_inverse_cdf(u: float, scale: float) -> float:
    """Inverts the Laplace(0, scale) CDF at u in (0, 1)."""
    if scale <= 0:
        raise ParameterError(f"scale must be positive, got {scale}")
    half = u - 0.5
    return -scale * np.sign(half) * np.log1p(-2.0 * abs(half))


def laplace(scale: float, rng: RngHandle) -> float:
    """Draws once from Laplace(0, scale) by CDF inversion on a uniform draw."""
    return float(laplace_inverse_cdf(rng.uniform(), scale))


def gaussian(sigma: float, rng: RngHandle) -> float:
    """Draws once from N(0, sigma^2)."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    return float(sigma * rng.standard_normal())


def log_sum_exp(values) -> float:
    """Computes log(sum(exp(values))) without overflow.

    Entries of -inf represent zero weight and are ignored; an all -inf input
    returns -inf.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return -np.inf
    hi = np.max(values)
    if hi == -np.inf:
        return -np.inf
    return float(hi + np.log(np.sum(np.exp(values - hi))))


def sample_log_categorical(log_weights, rng: RngHandle) -> int:
    """Samples index i with probability exp(w_i - log_sum_exp(w)).

    Uses the Gumbel-max trick so that the computation stays in log space.
    At least one weight must be finite.
    """
    log_weights = np.asarray(log_weights, dtype=float)
    if log_weights.size == 0 or not np.any(log_weights > -np.inf):
        raise ParameterError("all categorical weights are zero")
    u = rng.uniform(size=log_weights.shape)
    gumbel = -np.log(-np.log(u))
    return int(np.argmax(log_weights + gumbel))
