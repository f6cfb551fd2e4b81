"""Closed-form and numerically solved quantities behind the filter guarantees.

Conventions: alpha is the tail index (or any lower bound on it),
epsilon in (0,1) the block-size exponent, delta in (0,1) the failure
probability, T the physical pull budget.  The minimal per-round sample
size combines three terms; they are evaluated in log space so small
epsilon cannot overflow intermediate powers.
"""

import math
from dataclasses import dataclass

_LOG2 = math.log(2.0)
_LOG4 = math.log(4.0)
_MAX_EXP = 700.0  # keep exp() comfortably inside float64 range


@dataclass(frozen=True)
class TheoryParams:
    alpha: float
    epsilon: float
    delta: float
    horizon_T: int

    def __post_init__(self):
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not (self.horizon_T >= 1):
            raise ValueError(f"horizon_T must be >= 1, got {self.horizon_T}")


def median_bound(alpha):
    """Magnitude 4^(1/alpha) that a block median exceeds only with
    exponentially small probability."""
    if not (alpha > 0):
        raise ValueError(f"alpha must be positive, got {alpha}")
    return 4.0 ** (1.0 / alpha)


def lemma1_failure_prob(m):
    """Probability bound 2*exp(-m/8) that the median of m draws escapes
    the 4^(1/alpha) box, clamped to 1 for reporting."""
    m = int(m)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return min(1.0, 2.0 * math.exp(-m / 8.0))


def mom_bound(alpha, epsilon, n_tilde, delta):
    """High-probability envelope sqrt(2*4^(2/alpha)/n^(1-eps) * log(4/delta))
    on the filtered deviation.

    The guarantee itself uses delta in (0, 1); the formula stays well
    defined up to delta = 4 (where the log factor hits zero), which is
    handy for checking the algebra, so only that is enforced here.
    """
    if not (alpha > 0):
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not (0.0 < delta <= 4.0):
        raise ValueError(f"delta must lie in (0, 4], got {delta}")
    n_tilde = int(n_tilde)
    if n_tilde < 1:
        raise ValueError(f"n_tilde must be >= 1, got {n_tilde}")
    return math.sqrt(
        2.0 * 4.0 ** (2.0 / alpha) / n_tilde ** (1.0 - epsilon) * math.log(4.0 / delta)
    )


def _log_constant_C(epsilon):
    """log of the smallest C >= 1 with 2*C^(1-eps)*exp(-C^eps/16) <= 1.

    Works on t = log C: g(t) = log 2 + (1-eps)*t - exp(eps*t)/16 <= 0.
    g(0) = log 2 - 1/16 > 0, and g is eventually decreasing, so the
    smallest root lies on the decreasing branch; bracket by doubling,
    then bisect.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")

    def g(t):
        return _LOG2 + (1.0 - epsilon) * t - math.exp(epsilon * t) / 16.0

    lo = 0.0
    hi = 1.0
    while g(hi) > 0.0:
        hi *= 2.0
    while hi - lo > 1e-9 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def constant_C(epsilon):
    """Smallest C >= 1 satisfying 2*C^(1-eps)*exp(-C^eps/16) <= 1.

    Solved to 1e-6 relative tolerance on the satisfying side, so the
    returned C passes the inequality while C*(1 - 1e-4) fails it.
    Raises OverflowError when C exceeds the float64 range (tiny eps).
    """
    log_c = _log_constant_C(epsilon)
    if log_c > _MAX_EXP:
        raise OverflowError(f"C for epsilon={epsilon} exceeds the float64 range")
    return math.exp(log_c)


def theorem1_sample_size(epsilon, delta):
    """Minimal per-round sample count for the filtered-estimator guarantee
    at confidence delta: ceil(max(C(eps), (16*log(2/delta))^(1/eps)))."""
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    log_term = math.log(16.0 * math.log(2.0 / delta)) / epsilon
    log_n = max(_log_constant_C(epsilon), log_term)
    if log_n > _MAX_EXP:
        raise OverflowError("required sample size exceeds the float64 range")
    return math.ceil(math.exp(log_n))


def sample_size_terms(params):
    """The three competing lower bounds on n_tilde, as floats
    (C, horizon term, tail term)."""
    eps = params.epsilon
    log_c = _log_constant_C(eps)
    log_horizon = math.log(16.0 * math.log(2.0 * params.horizon_T / params.delta)) / eps
    log_tail = (
        _LOG2 + (2.0 / params.alpha) * _LOG4 + math.log(math.log(4.0 / params.delta))
    ) / (1.0 - eps)
    out = []
    for log_v in (log_c, log_horizon, log_tail):
        out.append(math.inf if log_v > _MAX_EXP else math.exp(log_v))
    return tuple(out)


def required_sample_size(params):
    """Ceiling of the three-way max of sample_size_terms(params)."""
    value = max(sample_size_terms(params))
    if math.isinf(value):
        raise OverflowError("required sample size exceeds the float64 range")
    return math.ceil(value)


def optimal_epsilon(alpha, delta, horizon_T):
    """Exponent equalising the horizon and tail terms of the sample size:
    eps = log A / (log A + log B) with A = 16*log(2T/delta) and
    B = 2*4^(2/alpha)*log(4/delta)."""
    if not (alpha > 0):
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not (horizon_T >= 1):
        raise ValueError(f"horizon_T must be >= 1, got {horizon_T}")
    log_a = math.log(16.0 * math.log(2.0 * horizon_T / delta))
    log_b = _LOG2 + (2.0 / alpha) * _LOG4 + math.log(math.log(4.0 / delta))
    if log_a <= 0.0 or log_b <= 0.0:
        raise ValueError("both sample-size terms must exceed e for the closed form")
    return log_a / (log_a + log_b)


def comparison_rate_crossover(moment_eps):
    """Block exponent below which the filtered rate 1/n^((1-eps)/2) beats
    the classical robust-estimator rate 1/n^(eps_m/(1+eps_m))."""
    if not (0.0 < moment_eps < 1.0):
        raise ValueError(f"moment_eps must lie in (0, 1), got {moment_eps}")
    return (1.0 - moment_eps) / (1.0 + moment_eps)
