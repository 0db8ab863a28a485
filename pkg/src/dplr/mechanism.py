"""End-to-end private regression mechanism and the model-count heuristic.

Pipeline: partition + per-partition OLS, tie-breaking perturbation, sorted
projections, depth-region volumes, the PTR gate at epsilon/2, and on a pass
the depth-restricted exponential mechanism at epsilon/2. A failed gate yields
the explicit failure result rather than an exception.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import depth, ptr, regression, sampler
from .errors import InsufficientDataError, ParameterError
from .noise import RngHandle


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float
    delta: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ParameterError(f"delta must be in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class MechanismResult:
    """Either a coefficient vector or the PTR failure outcome.

    ``failed`` is a legitimate private output, not an error. ``stage_seconds``
    and the recorded per-stage budgets exist for diagnostics and tests.
    """

    coefficients: np.ndarray | None
    ptr_epsilon: float
    sampling_epsilon: float
    stage_seconds: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.coefficients is None


def tukey_em(
    data: regression.Dataset,
    m: int,
    budget: PrivacyBudget,
    rng: RngHandle,
    ptr_noise_override: float | None = None,
) -> MechanismResult:
    """Runs the full mechanism with an even epsilon/2 split between gate and sampler."""
    if m < 8:
        raise ParameterError(f"need m >= 8 so the depth threshold is >= 2, got m={m}")
    if data.n // m < data.d:
        raise InsufficientDataError(
            f"floor(n/m) = {data.n // m} < d = {data.d}; too few rows per model"
        )
    eps_ptr = budget.epsilon / 2.0
    eps_em = budget.epsilon / 2.0
    timings: dict = {}

    start = time.perf_counter()
    models = regression.partition_fit(data, m, rng)
    timings["ols"] = time.perf_counter() - start

    start = time.perf_counter()
    perturbed = depth.perturb_models(models, rng)
    S = depth.sorted_projections(perturbed)
    log_v = depth.compute_log_volumes(S)
    passed = ptr.ptr_check(log_v, eps_ptr, budget.delta, rng, ptr_noise_override)
    if not passed:
        timings["post_ols"] = time.perf_counter() - start
        return MechanismResult(None, eps_ptr, eps_em, timings)
    dist = sampler.depth_weights(log_v, t=m // 4, epsilon=eps_em)
    i_hat = sampler.sample_depth(dist, rng)
    beta = sampler.sample_point_with_depth(S, i_hat, rng)
    timings["post_ols"] = time.perf_counter() - start
    return MechanismResult(beta, eps_ptr, eps_em, timings)


def heuristic_num_models(n: int, d: int) -> int:
    """Default number of models from the data dimensions alone.

    min(1000, largest multiple of 250 <= n / (2d)), floored at 250. Callers
    may always override.
    """
    if n < 8 * d:
        raise InsufficientDataError(f"need n >= 8*d, got n={n}, d={d}")
    candidate = (n // (2 * d)) // 250 * 250
    return max(250, min(1000, candidate))
