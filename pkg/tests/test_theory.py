import math

import pytest

from heavybandits.theory import (
    TheoryParams,
    comparison_rate_crossover,
    constant_C,
    lemma1_failure_prob,
    median_bound,
    mom_bound,
    optimal_epsilon,
    required_sample_size,
    sample_size_terms,
    theorem1_sample_size,
)


def test_median_bound_values():
    assert median_bound(1.0) == 4.0
    assert median_bound(2.0) == 2.0
    assert median_bound(0.5) == 16.0
    with pytest.raises(ValueError):
        median_bound(0.0)


def test_failure_prob_values():
    assert math.isclose(lemma1_failure_prob(8), 2 * math.exp(-1), rel_tol=1e-12)
    assert math.isclose(lemma1_failure_prob(80), 2 * math.exp(-10), rel_tol=1e-12)
    assert lemma1_failure_prob(1) == 1.0  # clamped
    probs = [lemma1_failure_prob(m) for m in range(1, 200)]
    assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_mom_bound_worked_example():
    expected = math.sqrt(32.0 / 100.0 * math.log(100.0))
    assert math.isclose(mom_bound(1.0, 0.5, 10**4, 0.04), expected, rel_tol=1e-12)
    assert math.isclose(expected, 1.2139, rel_tol=1e-4)


def test_mom_bound_monotonicities():
    assert mom_bound(1.0, 0.5, 10**4, 0.05) < mom_bound(1.0, 0.5, 10**3, 0.05)
    assert mom_bound(0.3, 0.5, 10**4, 0.05) > mom_bound(1.0, 0.5, 10**4, 0.05)


def test_mom_bound_log_term_unity():
    delta = 4.0 / math.e
    expected = math.sqrt(2.0 * 16.0 / math.sqrt(10**4))
    assert math.isclose(mom_bound(1.0, 0.5, 10**4, delta), expected, rel_tol=1e-12)


def test_constant_C_half_bracket():
    c = constant_C(0.5)
    assert 81**2 < c < 82**2


def test_constant_C_is_smallest_satisfying():
    for eps in [0.1 * i for i in range(1, 10)]:
        c = constant_C(eps)
        assert 2.0 * c ** (1 - eps) * math.exp(-(c**eps) / 16.0) <= 1.0
        shrunk = c * (1 - 1e-4)
        assert 2.0 * shrunk ** (1 - eps) * math.exp(-(shrunk**eps) / 16.0) > 1.0


def test_constant_C_decreases_from_half_to_point_eight():
    assert constant_C(0.8) < constant_C(0.5)


def test_required_sample_size_worked_example():
    params = TheoryParams(alpha=1.0, epsilon=0.5, delta=0.01, horizon_T=10**4)
    terms = sample_size_terms(params)
    assert math.isclose(terms[1], (16 * math.log(2e6)) ** 2, rel_tol=1e-9)
    assert math.isclose(terms[2], (32 * math.log(400)) ** 2, rel_tol=1e-9)
    n = required_sample_size(params)
    assert abs(n - 53890) / 53890 < 0.01


def test_required_sample_size_monotonicities():
    base = TheoryParams(alpha=1.0, epsilon=0.5, delta=0.01, horizon_T=10**4)
    n_base = required_sample_size(base)
    assert required_sample_size(TheoryParams(3.0, 0.5, 0.01, 10**4)) <= n_base
    assert required_sample_size(TheoryParams(1.0, 0.5, 0.01, 10**6)) >= n_base


def test_theorem1_sample_size_is_two_term_max():
    n = theorem1_sample_size(0.5, 0.05)
    assert n == math.ceil(constant_C(0.5))  # C dominates at this delta
    tighter = theorem1_sample_size(0.5, 1e-9)
    assert tighter == math.ceil((16 * math.log(2e9)) ** 2)


def test_optimal_epsilon_worked_example():
    eps = optimal_epsilon(1.0, 0.01, 10**4)
    assert 0.5 <= eps <= 0.6
    assert math.isclose(eps, 0.509, abs_tol=2e-3)


def test_optimal_epsilon_equalises_the_two_terms():
    eps = optimal_epsilon(1.0, 0.01, 10**4)
    params = TheoryParams(alpha=1.0, epsilon=eps, delta=0.01, horizon_T=10**4)
    _, horizon_term, tail_term = sample_size_terms(params)
    assert math.isclose(horizon_term, tail_term, rel_tol=1e-9)


def test_optimal_epsilon_increases_with_alpha():
    # log B = log(2*4^(2/alpha)*log(4/delta)) strictly decreases in alpha,
    # so eps = log A / (log A + log B) strictly increases in alpha
    values = [optimal_epsilon(a, 0.01, 10**4) for a in (0.5, 1.0, 3.0)]
    assert values[0] < values[1] < values[2]


def test_optimal_epsilon_is_locally_optimal_for_the_dominant_terms():
    for alpha in (0.5, 1.0, 3.0):
        eps = optimal_epsilon(alpha, 0.01, 10**4)

        def dominant(e):
            p = TheoryParams(alpha=alpha, epsilon=e, delta=0.01, horizon_T=10**4)
            _, horizon_term, tail_term = sample_size_terms(p)
            return max(horizon_term, tail_term)

        assert dominant(eps) <= dominant(min(eps + 0.1, 0.99))
        assert dominant(eps) <= dominant(max(eps - 0.1, 0.01))


def test_crossover_values():
    assert math.isclose(comparison_rate_crossover(1.0 / 3.0), 0.5, rel_tol=1e-12)
    assert math.isclose(comparison_rate_crossover(0.01), 0.99 / 1.01, rel_tol=1e-12)
    assert comparison_rate_crossover(0.999) < 1e-3
    with pytest.raises(ValueError):
        comparison_rate_crossover(0.0)


def test_params_validation():
    with pytest.raises(ValueError):
        TheoryParams(alpha=0.0, epsilon=0.5, delta=0.1, horizon_T=10)
    with pytest.raises(ValueError):
        TheoryParams(alpha=1.0, epsilon=1.0, delta=0.1, horizon_T=10)
    with pytest.raises(ValueError):
        TheoryParams(alpha=1.0, epsilon=0.5, delta=0.0, horizon_T=10)
    with pytest.raises(ValueError):
        TheoryParams(alpha=1.0, epsilon=0.5, delta=0.1, horizon_T=0)
