"""heavybandits: a simulation lab for linear bandits under (super)
heavy-tailed reward noise.

Building blocks: seeded heavy-tailed noise models, robust reward
filters (mean of medians, median of means, truncated mean), theory-side
sample-size calculators, an optimism-based base bandit, and a
reproducible experiment harness with a CLI.
"""

__version__ = "0.1.0"

from .estimators import (
    BlockPlan,
    block_plan,
    mean_of_medians,
    median,
    median_of_means,
    truncated_mean,
)
from .noise import NoiseModel, sample, sample_many, tail_probability_empirical, verify_alpha_heavy_tail
from .rng import RngStream

__all__ = [
    "__version__",
    "BlockPlan",
    "NoiseModel",
    "RngStream",
    "block_plan",
    "mean_of_medians",
    "median",
    "median_of_means",
    "truncated_mean",
    "sample",
    "sample_many",
    "tail_probability_empirical",
    "verify_alpha_heavy_tail",
]
