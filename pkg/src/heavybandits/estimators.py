"""Robust location estimators for (super) heavy-tailed samples.

Three estimators over a batch of n rewards in pull order:

* truncated mean: zero out samples above a magnitude threshold c and
  divide the sum by the FULL count n (truncated entries contribute 0).
* median of means: average within consecutive blocks, take the median
  of the block means.
* mean of medians: take the median within consecutive blocks, average
  the block medians.  This is the filter that keeps working when the
  noise has no mean at all.

Block geometry is shared: block size k = ceil(n^epsilon), block count
k' = floor(n/k); the trailing n - k*k' samples are discarded.  Medians
use the midpoint rule on even lengths (mean of the two middle order
statistics), which preserves the symmetry the concentration argument
needs.  All sums are strictly left to right, so results match a literal
evaluation of the defining formulas bit for bit.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class BlockPlan:
    """Partition geometry (n_tilde, epsilon) -> (k, k_prime)."""

    n_tilde: int
    epsilon: float
    k: int
    k_prime: int

    @property
    def used(self):
        """Number of leading samples actually consumed; the rest are discarded."""
        return self.k * self.k_prime


def block_plan(n_tilde, epsilon):
    """Exact block geometry: k = ceil(n_tilde^epsilon), k' = floor(n_tilde/k).

    The power is nudged to the nearest integer when within 1e-9 relative
    so that exact cases like 9**0.5 == 3 never ceil one too high.
    """
    n_tilde = int(n_tilde)
    if n_tilde < 1:
        raise ValueError(f"n_tilde must be >= 1, got {n_tilde}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    raw = float(n_tilde) ** epsilon
    nearest = round(raw)
    if abs(raw - nearest) <= 1e-9 * max(1.0, abs(nearest)):
        k = int(nearest)
    else:
        k = math.ceil(raw)
    if k > n_tilde:
        raise ValueError(f"block size k={k} exceeds n_tilde={n_tilde}")
    k_prime = n_tilde // k
    if k_prime < 1:
        raise ValueError(f"plan (n_tilde={n_tilde}, epsilon={epsilon}) yields zero blocks")
    return BlockPlan(n_tilde=n_tilde, epsilon=float(epsilon), k=k, k_prime=k_prime)


def _as_values(values, name="values"):
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    return arr


def median(values):
    """Exact midpoint-rule median; input is left unmodified."""
    arr = _as_values(values)
    if not np.all(np.isfinite(arr)):
        raise ValueError("median requires finite values")
    return float(kernels.median_scalar(arr))


def mean_of_medians(values, plan):
    """Mean of per-block medians over the first k*k' samples, in pull order."""
    arr = _as_values(values)
    if arr.size != plan.n_tilde:
        raise ValueError(
            f"batch has {arr.size} values but the plan expects n_tilde={plan.n_tilde}"
        )
    return float(kernels.mom_scalar(arr, plan.k, plan.k_prime))


def truncated_mean(values, c):
    """Sum of samples with |x| <= c divided by the FULL sample count."""
    arr = _as_values(values)
    if not (c > 0):
        raise ValueError(f"truncation threshold c must be positive, got {c}")
    return float(kernels.truncated_mean_scalar(arr, float(c)))


def median_of_means(values, k, k_prime):
    """Median across k' consecutive block means of size k."""
    arr = _as_values(values)
    k = int(k)
    k_prime = int(k_prime)
    if k < 1 or k_prime < 1:
        raise ValueError("k and k_prime must be >= 1")
    if arr.size < k * k_prime:
        raise ValueError(f"need at least k*k'={k * k_prime} values, got {arr.size}")
    return float(kernels.median_of_means_scalar(arr, k, k_prime))


def mean_of_medians_batch(values_2d, plan):
    """Row-wise mean of medians over a (trials, n_tilde) array; the hot path
    for Monte-Carlo verification."""
    arr = np.ascontiguousarray(values_2d, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != plan.n_tilde:
        raise ValueError("expected shape (trials, n_tilde)")
    return kernels.mom_batch(arr, plan.k, plan.k_prime)


def median_batch(values_2d):
    """Row-wise midpoint-rule median of a (trials, n) array."""
    arr = np.ascontiguousarray(values_2d, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise ValueError("expected a nonempty 2-d array")
    return kernels.median_batch(arr)
