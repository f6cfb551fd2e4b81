"""Hot numeric kernels with a selectable backend.

By default the numba backend is used when numba imports cleanly.  Set
``HEAVYBANDITS_DISABLE_NUMBA`` to any non-empty value to force the
pure-numpy fallback.  ``BACKEND`` names the active implementation.

Both backends perform identical arithmetic in identical order for the
estimator kernels, so those return bit-identical results either way.
The bandit-step kernels (``ucb_scores``, ``ridge_update``) may differ
from each other in the last ulp because the fallback uses BLAS-reduced
matrix products; each backend is individually deterministic.
"""

import os

from . import _numpy

if os.environ.get("HEAVYBANDITS_DISABLE_NUMBA", ""):
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _numpy
        BACKEND = "numpy"

median_scalar = _impl.median_scalar
mom_scalar = _impl.mom_scalar
truncated_mean_scalar = _impl.truncated_mean_scalar
median_of_means_scalar = _impl.median_of_means_scalar
ucb_scores = _impl.ucb_scores
ridge_update = _impl.ridge_update

# The row-batch estimators are served by numpy's vectorised sort under both
# backends: it beats the jit loop on every measured shape (see
# benchmarks/bench_kernels.py), and the two implementations return
# bit-identical values anyway.
median_batch = _numpy.median_batch
mom_batch = _numpy.mom_batch

__all__ = [
    "BACKEND",
    "median_scalar",
    "median_batch",
    "mom_scalar",
    "mom_batch",
    "truncated_mean_scalar",
    "median_of_means_scalar",
    "ucb_scores",
    "ridge_update",
]
