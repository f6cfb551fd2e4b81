"""Timing comparison of the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from heavybandits.kernels import _numpy

try:
    from heavybandits.kernels import _numba
except ImportError:
    _numba = None


def bench(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bandit_loop(impl, gram, moment, arms, rounds):
    theta = np.zeros(arms.shape[1])
    for t in range(rounds):
        scores = impl.ucb_scores(gram, theta, arms, 1.0 + 0.01 * t)
        arm = arms[int(np.argmax(scores))]
        theta = impl.ridge_update(gram, moment, arm, 0.5)
    return theta


def scalar_loop(fn, values, k, k_prime, calls):
    acc = 0.0
    for _ in range(calls):
        acc += fn(values, k, k_prime)
    return acc


def main():
    gen = np.random.Generator(np.random.Philox(key=[2024, 0]))

    trials_small = gen.standard_t(1.0, size=(100_000, 65))
    trials_big = gen.standard_t(0.5, size=(2_000, 6560))
    scalar_batch = gen.standard_t(1.0, size=64)

    d, K = 10, 20
    arms = gen.random((K, d))
    arms /= np.linalg.norm(arms, axis=1, keepdims=True)

    cases = [
        ("median_batch (1e5 x 65)", "median_batch", (trials_small,)),
        ("mom_batch    (2e3 x 6560, k=82)", "mom_batch", (trials_big, 82, 80)),
    ]

    print(f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, name, args in cases:
        t_np = bench(getattr(_numpy, name), *args)
        if _numba is None:
            print(f"{label:<34} {t_np * 1e3:>8.2f}ms {'n/a':>10}")
            continue
        t_nb = bench(getattr(_numba, name), *args)
        print(f"{label:<34} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>8.1f}x")

    calls = 20_000
    t_np = bench(scalar_loop, _numpy.mom_scalar, scalar_batch, 16, 4, calls, repeat=3)
    label = f"mom_scalar (n=64, k=16) x{calls}"
    if _numba is not None:
        t_nb = bench(scalar_loop, _numba.mom_scalar, scalar_batch, 16, 4, calls, repeat=3)
        print(f"{label:<34} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>8.1f}x")
    else:
        print(f"{label:<34} {t_np * 1e3:>8.2f}ms {'n/a':>10}")

    rounds = 2000
    t_np = bench(
        bandit_loop, _numpy, 0.03 * np.eye(d), np.zeros(d), arms, rounds, repeat=3
    )
    label = f"bandit step loop ({rounds} rounds)"
    if _numba is None:
        print(f"{label:<34} {t_np * 1e3:>8.2f}ms {'n/a':>10}")
        return
    t_nb = bench(bandit_loop, _numba, 0.03 * np.eye(d), np.zeros(d), arms, rounds, repeat=3)
    print(f"{label:<34} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
