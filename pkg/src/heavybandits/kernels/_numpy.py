"""Pure-numpy backend for the hot kernels.

Selected by ``heavybandits.kernels`` when numba is unavailable or when
``HEAVYBANDITS_DISABLE_NUMBA`` is set.  Every estimator kernel performs
its sums strictly left to right (the batch versions accumulate column
by column, which is the same thing row-wise), so results are
bit-identical to the numba backend and to a literal evaluation of the
defining formulas.  The scalar fallbacks trade speed for that fidelity;
the batch versions stay vectorised.
"""

import numpy as np


def _middle(sorted_vals):
    """Midpoint-rule median of already-sorted values along the last axis."""
    n = sorted_vals.shape[-1]
    h = n // 2
    if n % 2 == 1:
        return sorted_vals[..., h]
    return (sorted_vals[..., h - 1] + sorted_vals[..., h]) / 2.0


def median_scalar(values):
    return float(_middle(np.sort(values)))


def median_batch(values):
    """Row-wise median of a (trials, n) array."""
    return np.ascontiguousarray(_middle(np.sort(values, axis=1)))


def mom_scalar(values, k, k_prime):
    med = _middle(np.sort(values[: k * k_prime].reshape(k_prime, k), axis=1))
    acc = 0.0
    for j in range(k_prime):
        acc += med[j]
    return acc / k_prime


def mom_batch(values, k, k_prime):
    """Row-wise mean of per-block medians over (trials, n) with n >= k*k'."""
    m = values.shape[0]
    blocks = values[:, : k * k_prime].reshape(m, k_prime, k)
    med = _middle(np.sort(blocks, axis=2))
    acc = med[:, 0].copy()
    for j in range(1, k_prime):
        acc += med[:, j]
    return acc / k_prime


def truncated_mean_scalar(values, c):
    acc = 0.0
    for x in values:
        if abs(x) <= c:
            acc += x
    return acc / values.shape[0]


def median_of_means_scalar(values, k, k_prime):
    means = np.empty(k_prime)
    for j in range(k_prime):
        acc = 0.0
        for i in range(j * k, (j + 1) * k):
            acc += values[i]
        means[j] = acc / k
    return median_scalar(means)


def ucb_scores(gram, theta_hat, arms, beta):
    """Optimistic index of every arm: x'theta_hat + beta*sqrt(x'V^-1 x)."""
    spread = np.linalg.solve(gram, arms.T)
    quad = np.einsum("kd,dk->k", arms, spread)
    return arms @ theta_hat + beta * np.sqrt(np.maximum(quad, 0.0))


def ridge_update(gram, moment_vec, arm, reward):
    """Rank-one update of the ridge statistics, in place; returns theta_hat."""
    gram += np.outer(arm, arm)
    moment_vec += reward * arm
    return np.linalg.solve(gram, moment_vec)
