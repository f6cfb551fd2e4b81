"""Ground-truth linear bandit environment and pseudo-regret accounting.

Rewards are theta_star . x + eta with eta drawn from the instance's
noise model.  Pseudo-regret is computed from noiseless means only, so
it is well defined even when the noise has no mean, and identical
across reruns of the same arm-choice sequence regardless of the noise
seed.
"""

import re
from dataclasses import dataclass, field, replace

import numpy as np

from .noise import NoiseModel, sample, sample_many

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BanditInstance:
    """Hidden parameter, finite arm set and noise channel."""

    theta_star: np.ndarray
    arms: np.ndarray
    noise: NoiseModel
    optimal_index: int = field(init=False)
    optimal_value: float = field(init=False)

    def __post_init__(self):
        theta = np.ascontiguousarray(self.theta_star, dtype=np.float64)
        arms = np.ascontiguousarray(self.arms, dtype=np.float64)
        if theta.ndim != 1:
            raise ValueError("theta_star must be a vector")
        if arms.ndim != 2 or arms.shape[1] != theta.shape[0]:
            raise ValueError("arms must be a (K, d) matrix matching theta_star")
        if abs(np.linalg.norm(theta) - 1.0) > _NORM_TOL:
            raise ValueError("theta_star must have unit Euclidean norm")
        norms = np.linalg.norm(arms, axis=1)
        if np.any(np.abs(norms - 1.0) > _NORM_TOL):
            raise ValueError("every arm must have unit Euclidean norm")
        object.__setattr__(self, "theta_star", theta)
        object.__setattr__(self, "arms", arms)
        means = arms @ theta
        best = int(np.argmax(means))
        object.__setattr__(self, "optimal_index", best)
        object.__setattr__(self, "optimal_value", float(means[best]))

    @property
    def d(self):
        return self.theta_star.shape[0]

    @property
    def K(self):
        return self.arms.shape[0]

    def mean_reward(self, arm_index):
        return float(self.arms[arm_index] @ self.theta_star)

    def gap(self, arm_index):
        return self.optimal_value - self.mean_reward(arm_index)

    def with_arms(self, arms):
        """Same hidden parameter and noise, fresh arm set (per-round contexts)."""
        return replace(self, arms=arms)


def sample_arms(d, K, rng):
    """K arms drawn coordinate-wise uniform on [0,1], normalised to unit norm."""
    raw = rng.gen.random((K, d))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    # a zero row has probability zero; fall back to a basis vector if it happens
    bad = norms[:, 0] < _NORM_TOL
    if np.any(bad):
        raw[bad] = 0.0
        raw[bad, 0] = 1.0
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
    return raw / norms


def generate_instance(d, K, noise, rng):
    """Standard experiment instance: theta_star = 1/sqrt(d) in every
    coordinate, arms uniform on [0,1]^d normalised to the unit sphere."""
    d = int(d)
    K = int(K)
    if d < 1 or K < 1:
        raise ValueError("d and K must be >= 1")
    theta = np.full(d, 1.0 / np.sqrt(d))
    arms = sample_arms(d, K, rng)
    return BanditInstance(theta_star=theta, arms=arms, noise=noise)


def pull(instance, arm_index, rng):
    """One physical pull: mean reward plus a fresh noise draw."""
    if not 0 <= arm_index < instance.K:
        raise IndexError(f"arm_index {arm_index} out of range [0, {instance.K})")
    return instance.mean_reward(arm_index) + sample(instance.noise, rng)


def pull_many(instance, arm_index, n, rng):
    """n physical pulls of one arm; same stream consumption as n single pulls
    of a batch draw."""
    if not 0 <= arm_index < instance.K:
        raise IndexError(f"arm_index {arm_index} out of range [0, {instance.K})")
    return instance.mean_reward(arm_index) + sample_many(instance.noise, rng, n)


class RegretTracker:
    """Append-only per-physical-pull log of arm choice and pseudo-regret."""

    def __init__(self, capacity=1024):
        self._arm = np.empty(capacity, dtype=np.int64)
        self._instant = np.empty(capacity, dtype=np.float64)
        self._cumulative = np.empty(capacity, dtype=np.float64)
        self._n = 0
        self._total = 0.0

    def _grow(self, needed):
        cap = self._arm.shape[0]
        if self._n + needed <= cap:
            return
        new_cap = max(cap * 2, self._n + needed)
        for name in ("_arm", "_instant", "_cumulative"):
            old = getattr(self, name)
            fresh = np.empty(new_cap, dtype=old.dtype)
            fresh[: self._n] = old[: self._n]
            setattr(self, name, fresh)

    @property
    def pull_count(self):
        return self._n

    @property
    def cumulative_regret(self):
        return self._total

    def record(self, instance, arm_index):
        """Log one pull: instant regret is the noiseless gap of the arm."""
        self.record_many(instance, arm_index, 1)

    def record_many(self, instance, arm_index, n):
        """Log n consecutive pulls of one arm (the filter wrapper's unit)."""
        if not 0 <= arm_index < instance.K:
            raise IndexError(f"arm_index {arm_index} out of range [0, {instance.K})")
        n = int(n)
        gap = instance.gap(arm_index)
        self._grow(n)
        sl = slice(self._n, self._n + n)
        self._arm[sl] = arm_index
        self._instant[sl] = gap
        self._cumulative[sl] = self._total + gap * np.arange(1, n + 1)
        self._n += n
        self._total += gap * n

    def arm_indices(self):
        return self._arm[: self._n].copy()

    def instant_regret(self):
        return self._instant[: self._n].copy()

    def cumulative_regret_series(self):
        return self._cumulative[: self._n].copy()


def save_instance(instance, path):
    """Plain-text snapshot: header comments, then theta_star row, then K arm rows."""
    header = (
        "linear bandit instance snapshot\n"
        f"d={instance.d} K={instance.K}\n"
        f"noise: {instance.noise.describe()}\n"
        "rows: theta_star first, then one row per arm"
    )
    matrix = np.vstack([instance.theta_star[None, :], instance.arms])
    np.savetxt(path, matrix, fmt="%.17g", header=header)


def load_instance(path):
    """Rebuild an instance from save_instance output."""
    noise = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            text = line[1:].strip()
            if text.startswith("noise:"):
                spec = text[len("noise:") :].strip()
                m = re.match(r"gaussian sigma=([-\w.+]+)", spec)
                if m:
                    noise = NoiseModel.gaussian(float(m.group(1)))
                m = re.match(r"student_t df=([-\w.+]+)", spec)
                if m:
                    noise = NoiseModel.student_t(float(m.group(1)))
    if noise is None:
        raise ValueError(f"{path} has no parsable noise header line")
    matrix = np.loadtxt(path, ndmin=2)
    return BanditInstance(theta_star=matrix[0], arms=matrix[1:], noise=noise)
