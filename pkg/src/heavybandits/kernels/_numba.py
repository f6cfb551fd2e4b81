"""Numba backend: @njit versions of the hot kernels.

Arithmetic order matches heavybandits.kernels._numpy exactly, so the
estimator kernels agree bit for bit across backends.  Kernels never use
fastmath or parallel reductions: reproducibility beats the last 2x.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def median_scalar(values):
    buf = values.copy()
    buf.sort()
    n = buf.shape[0]
    h = n // 2
    if n % 2 == 1:
        return buf[h]
    return (buf[h - 1] + buf[h]) / 2.0


@njit(cache=True)
def median_batch(values):
    m, n = values.shape
    out = np.empty(m)
    buf = np.empty(n)
    h = n // 2
    for r in range(m):
        buf[:] = values[r]
        buf.sort()
        if n % 2 == 1:
            out[r] = buf[h]
        else:
            out[r] = (buf[h - 1] + buf[h]) / 2.0
    return out


@njit(cache=True)
def mom_scalar(values, k, k_prime):
    buf = np.empty(k)
    h = k // 2
    acc = 0.0
    for j in range(k_prime):
        buf[:] = values[j * k : (j + 1) * k]
        buf.sort()
        if k % 2 == 1:
            acc += buf[h]
        else:
            acc += (buf[h - 1] + buf[h]) / 2.0
    return acc / k_prime


@njit(cache=True)
def mom_batch(values, k, k_prime):
    m = values.shape[0]
    out = np.empty(m)
    buf = np.empty(k)
    h = k // 2
    for r in range(m):
        acc = 0.0
        for j in range(k_prime):
            buf[:] = values[r, j * k : (j + 1) * k]
            buf.sort()
            if k % 2 == 1:
                acc += buf[h]
            else:
                acc += (buf[h - 1] + buf[h]) / 2.0
        out[r] = acc / k_prime
    return out


@njit(cache=True)
def truncated_mean_scalar(values, c):
    acc = 0.0
    for i in range(values.shape[0]):
        if abs(values[i]) <= c:
            acc += values[i]
    return acc / values.shape[0]


@njit(cache=True)
def median_of_means_scalar(values, k, k_prime):
    means = np.empty(k_prime)
    for j in range(k_prime):
        acc = 0.0
        base = j * k
        for i in range(k):
            acc += values[base + i]
        means[j] = acc / k
    means.sort()
    h = k_prime // 2
    if k_prime % 2 == 1:
        return means[h]
    return (means[h - 1] + means[h]) / 2.0


@njit(cache=True)
def ucb_scores(gram, theta_hat, arms, beta):
    n_arms, d = arms.shape
    spread = np.linalg.solve(gram, arms.T.copy())
    scores = np.empty(n_arms)
    for a in range(n_arms):
        mean = 0.0
        quad = 0.0
        for j in range(d):
            mean += arms[a, j] * theta_hat[j]
            quad += arms[a, j] * spread[j, a]
        if quad < 0.0:
            quad = 0.0
        scores[a] = mean + beta * np.sqrt(quad)
    return scores


@njit(cache=True)
def ridge_update(gram, moment_vec, arm, reward):
    d = arm.shape[0]
    for i in range(d):
        for j in range(d):
            gram[i, j] += arm[i] * arm[j]
        moment_vec[i] += reward * arm[i]
    return np.linalg.solve(gram, moment_vec)
