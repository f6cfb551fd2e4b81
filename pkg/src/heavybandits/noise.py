"""Symmetric noise families and empirical verification of polynomial tail bounds.

The tail model: a symmetric random variable eta has tail index ``alpha``
when Pr(|eta| > y) <= 1/y^alpha for every y > 0.  Smaller alpha means a
heavier tail.  Student-t with ``df`` degrees of freedom carries declared
index df (its tail exponent); a Gaussian has no finite declared index.
"""

import math
from dataclasses import dataclass

import numpy as np

_CHUNK = 1 << 20


@dataclass(frozen=True)
class NoiseModel:
    """A symmetric, zero-centred noise distribution with a declared tail index."""

    kind: str
    sigma: float = 1.0
    df: float = float("nan")

    def __post_init__(self):
        if self.kind == "gaussian":
            if not (self.sigma > 0):
                raise ValueError(f"gaussian sigma must be positive, got {self.sigma}")
        elif self.kind == "student_t":
            if not (self.df > 0):
                raise ValueError(f"student_t df must be positive, got {self.df}")
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sigma=1.0):
        return cls(kind="gaussian", sigma=float(sigma))

    @classmethod
    def student_t(cls, df):
        return cls(kind="student_t", df=float(df))

    @property
    def declared_alpha(self):
        """Tail index: df for Student-t, None for Gaussian (lighter than any polynomial)."""
        return self.df if self.kind == "student_t" else None

    def describe(self):
        if self.kind == "gaussian":
            return f"gaussian sigma={self.sigma!r}"
        return f"student_t df={self.df!r}"


def sample_many(model, rng, n):
    """Draw ``n`` variates from ``model`` using stream ``rng``.

    Student-t with arbitrary df > 0 (including fractional) is generated
    as Z / sqrt(G/df) with Z standard normal and G ~ Gamma(df/2, scale 2),
    i.e. a chi-square with df degrees of freedom; this is exact for any
    positive df.  The draw order is one normal batch then one gamma
    batch, so batched and repeated-scalar sampling consume the stream
    identically per call.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    gen = rng.gen
    if model.kind == "gaussian":
        return model.sigma * gen.standard_normal(n)
    z = gen.standard_normal(n)
    g = 2.0 * gen.standard_gamma(model.df / 2.0, n)
    return z / np.sqrt(g / model.df)


def sample(model, rng):
    """Draw a single variate; advances the stream like sample_many(model, rng, 1)."""
    return float(sample_many(model, rng, 1)[0])


def tail_probability_empirical(model, y, n_samples, rng):
    """Fraction of ``n_samples`` draws with |eta| > y."""
    if not (y > 0):
        raise ValueError(f"y must be positive, got {y}")
    n_samples = int(n_samples)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    count = 0
    remaining = n_samples
    while remaining > 0:
        m = min(remaining, _CHUNK)
        draws = sample_many(model, rng, m)
        count += int(np.count_nonzero(np.abs(draws) > y))
        remaining -= m
    return count / n_samples


@dataclass(frozen=True)
class TailCheckRow:
    y: float
    empirical: float
    bound: float
    std_err: float
    passed: bool


@dataclass(frozen=True)
class TailCheckReport:
    model: NoiseModel
    alpha: float
    n_samples: int
    rows: tuple

    @property
    def all_pass(self):
        return all(r.passed for r in self.rows)


def verify_alpha_heavy_tail(model, alpha, y_grid, n_samples, rng):
    """Empirically check Pr(|eta| > y) <= 1/y^alpha on a grid of thresholds.

    One shared batch of ``n_samples`` draws is evaluated at every grid
    point.  A point passes when the empirical tail probability does not
    exceed the bound by more than three binomial standard errors.
    """
    y_grid = [float(y) for y in y_grid]
    if not y_grid:
        raise ValueError("y_grid must be nonempty")
    if any(y < 1 for y in y_grid):
        raise ValueError("y_grid values must be >= 1")
    if not (alpha > 0):
        raise ValueError(f"alpha must be positive, got {alpha}")
    n_samples = int(n_samples)
    counts = np.zeros(len(y_grid), dtype=np.int64)
    remaining = n_samples
    while remaining > 0:
        m = min(remaining, _CHUNK)
        draws = np.abs(sample_many(model, rng, m))
        for i, y in enumerate(y_grid):
            counts[i] += int(np.count_nonzero(draws > y))
        remaining -= m
    rows = []
    for i, y in enumerate(y_grid):
        p_hat = counts[i] / n_samples
        bound = 1.0 / y**alpha
        se = math.sqrt(p_hat * (1.0 - p_hat) / n_samples)
        rows.append(
            TailCheckRow(
                y=y,
                empirical=p_hat,
                bound=bound,
                std_err=se,
                passed=p_hat <= bound + 3.0 * se,
            )
        )
    return TailCheckReport(model=model, alpha=float(alpha), n_samples=n_samples, rows=tuple(rows))
