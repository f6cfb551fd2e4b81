"""Optimism-based base bandit and the reward-filter wrapper around it.

The base algorithm keeps ridge-regression statistics (V = lambda*I +
sum x x', b = sum x r) and plays the arm maximising theta_hat . x +
beta_t * sqrt(x' V^-1 x).  The wrapper turns one base decision (a
logical round) into n_tilde physical pulls of the chosen arm, feeds the
pulls through a configured robust estimator, and hands the single
filtered value back as that round's reward.  Regret is accounted per
physical pull.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bandit_env import RegretTracker, pull_many, sample_arms
from .estimators import BlockPlan, block_plan

ARM_NORM_BOUND = 1.0
PARAM_NORM_BOUND = 1.0


@dataclass(frozen=True)
class AlgorithmConfig:
    """Base-algorithm knobs: ridge weight, noise-scale proxy v (a tuned
    bound on the filtered noise's second moment), confidence delta and
    the number of logical rounds to be played."""

    ridge_lambda: float = 1.0
    sub_gauss_proxy_v: float = 1.0
    delta: float = 0.01
    horizon_logical: int = 1

    def __post_init__(self):
        if not (self.ridge_lambda > 0):
            raise ValueError(f"ridge_lambda must be positive, got {self.ridge_lambda}")
        if not (self.sub_gauss_proxy_v > 0):
            raise ValueError(f"sub_gauss_proxy_v must be positive, got {self.sub_gauss_proxy_v}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.horizon_logical < 1:
            raise ValueError(f"horizon_logical must be >= 1, got {self.horizon_logical}")


class OfulState:
    """Ridge statistics of the base algorithm."""

    __slots__ = ("gram", "moment_vec", "theta_hat", "round")

    def __init__(self, gram, moment_vec, theta_hat, round):
        self.gram = gram
        self.moment_vec = moment_vec
        self.theta_hat = theta_hat
        self.round = round

    @classmethod
    def initial(cls, d, ridge_lambda):
        return cls(
            gram=ridge_lambda * np.eye(d),
            moment_vec=np.zeros(d),
            theta_hat=np.zeros(d),
            round=0,
        )

    @property
    def d(self):
        return self.moment_vec.shape[0]


def confidence_radius(state, config, d):
    """beta_t = sqrt(v) * sqrt(d*log((1 + t L^2/lambda)/delta)) + sqrt(lambda)*S
    with L = S = 1 (unit arm and parameter norms)."""
    t = state.round
    lam = config.ridge_lambda
    inflation = (1.0 + t * ARM_NORM_BOUND**2 / lam) / config.delta
    return math.sqrt(config.sub_gauss_proxy_v) * math.sqrt(d * math.log(inflation)) + math.sqrt(
        lam
    ) * PARAM_NORM_BOUND


def oful_select(state, arms, config):
    """Index of the arm with the highest optimistic score; ties go to the
    lowest index (argmax returns the first maximiser)."""
    arms = np.ascontiguousarray(arms, dtype=np.float64)
    if arms.ndim != 2 or arms.shape[0] == 0:
        raise ValueError("arms must be a nonempty (K, d) matrix")
    beta = confidence_radius(state, config, arms.shape[1])
    scores = kernels.ucb_scores(state.gram, state.theta_hat, arms, beta)
    return int(np.argmax(scores))


def oful_update(state, arm, reward):
    """Absorb one (arm, reward) pair: rank-one gram update, refreshed ridge
    estimate, round counter bump."""
    if not math.isfinite(reward):
        raise ValueError(f"non-finite reward {reward!r}; upstream estimator bug")
    arm = np.ascontiguousarray(arm, dtype=np.float64)
    state.theta_hat = kernels.ridge_update(state.gram, state.moment_vec, arm, float(reward))
    state.round += 1
    return state


@dataclass(frozen=True)
class FilterConfig:
    """Which estimator condenses the n_tilde pulls of a logical round.

    kind is one of raw, mom, truncated_mean, median_of_means, custom.
    ``custom`` takes any callable mapping the reward array to a float
    and exists for testing and for plugging in new estimators.
    """

    kind: str
    n_tilde: int
    plan: BlockPlan = None
    threshold_c: float = None
    fn: object = None

    @classmethod
    def raw(cls):
        """Identity filter: one pull per round, passed through unchanged."""
        return cls(kind="raw", n_tilde=1)

    @classmethod
    def mean_of_medians(cls, n_tilde, epsilon):
        return cls(kind="mom", n_tilde=int(n_tilde), plan=block_plan(n_tilde, epsilon))

    @classmethod
    def truncated(cls, n_tilde, threshold_c):
        if not (threshold_c > 0):
            raise ValueError(f"threshold_c must be positive, got {threshold_c}")
        return cls(kind="truncated_mean", n_tilde=int(n_tilde), threshold_c=float(threshold_c))

    @classmethod
    def median_of_means(cls, n_tilde, epsilon):
        return cls(kind="median_of_means", n_tilde=int(n_tilde), plan=block_plan(n_tilde, epsilon))

    @classmethod
    def custom(cls, fn, n_tilde):
        return cls(kind="custom", n_tilde=int(n_tilde), fn=fn)


def apply_filter(filter_cfg, rewards):
    """Condense one round's physical rewards to the scalar fed to the base
    algorithm.  Never inspects anything but the reward values."""
    kind = filter_cfg.kind
    if kind == "raw":
        return float(rewards[0])
    if kind == "mom":
        p = filter_cfg.plan
        return float(kernels.mom_scalar(rewards, p.k, p.k_prime))
    if kind == "truncated_mean":
        return float(kernels.truncated_mean_scalar(rewards, filter_cfg.threshold_c))
    if kind == "median_of_means":
        p = filter_cfg.plan
        return float(kernels.median_of_means_scalar(rewards, p.k, p.k_prime))
    if kind == "custom":
        return float(filter_cfg.fn(rewards))
    raise ValueError(f"unknown filter kind {kind!r}")


def filtered_round(state, config, env, filter_cfg, rng, tracker):
    """One logical round: select, pull the arm n_tilde times, filter, update.

    All n_tilde physical pulls are logged in the tracker.  The caller
    guarantees the remaining physical budget covers n_tilde pulls.
    Returns (arm_index, filtered_reward).
    """
    arm_index = oful_select(state, env.arms, config)
    rewards = pull_many(env, arm_index, filter_cfg.n_tilde, rng)
    tracker.record_many(env, arm_index, filter_cfg.n_tilde)
    value = apply_filter(filter_cfg, rewards)
    oful_update(state, env.arms[arm_index], value)
    return arm_index, value


@dataclass(frozen=True)
class RunTrace:
    """Per-physical-pull log of one simulation path plus the per-logical-round
    relative estimation error |theta_hat - theta_star| / |theta_star|."""

    arm_index: np.ndarray
    instant_regret: np.ndarray
    cumulative_regret: np.ndarray
    est_error: np.ndarray
    round_est_error: np.ndarray
    n_tilde: int
    n_rounds: int

    @property
    def n_pulls(self):
        return self.arm_index.shape[0]

    @property
    def final_regret(self):
        return float(self.cumulative_regret[-1])

    @property
    def final_est_error(self):
        return float(self.round_est_error[-1])


def run_path(env, algorithm_cfg, filter_cfg, horizon_T, rng, arm_mode="fixed"):
    """Play floor(T / n_tilde) logical rounds, discarding the remainder budget.

    In per_round mode a fresh arm set is drawn from the path stream
    before every selection.  The per-pull est_error column holds the
    error of theta_hat after the logical round containing each pull.
    """
    if arm_mode not in ("fixed", "per_round"):
        raise ValueError(f"arm_mode must be 'fixed' or 'per_round', got {arm_mode!r}")
    n_tilde = filter_cfg.n_tilde
    horizon_T = int(horizon_T)
    n_rounds = horizon_T // n_tilde
    if n_rounds < 1:
        raise ValueError(f"physical budget {horizon_T} cannot cover one round of {n_tilde} pulls")
    state = OfulState.initial(env.d, algorithm_cfg.ridge_lambda)
    tracker = RegretTracker(capacity=n_rounds * n_tilde)
    round_err = np.empty(n_rounds)
    theta_norm = np.linalg.norm(env.theta_star)
    cur = env
    for t in range(n_rounds):
        if arm_mode == "per_round":
            cur = env.with_arms(sample_arms(env.d, env.K, rng))
        filtered_round(state, algorithm_cfg, cur, filter_cfg, rng, tracker)
        round_err[t] = np.linalg.norm(state.theta_hat - env.theta_star) / theta_norm
    return RunTrace(
        arm_index=tracker.arm_indices(),
        instant_regret=tracker.instant_regret(),
        cumulative_regret=tracker.cumulative_regret_series(),
        est_error=np.repeat(round_err, n_tilde),
        round_est_error=round_err,
        n_tilde=n_tilde,
        n_rounds=n_rounds,
    )
