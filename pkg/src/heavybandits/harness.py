"""Experiment driver: multi-path simulation, aggregation, CSV output and
the Monte-Carlo verification suite for the concentration guarantees.

Seeding: path p uses stream index p of the configured base seed, and
every algorithm replays the same per-path stream (common random
numbers), so regret differences between algorithms on a path reflect
the algorithms rather than the draws.  Reruns with an identical config
produce byte-identical CSV files; wall-clock and similar metadata go to
a sidecar JSON, never into the CSVs.
"""

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from . import kernels
from .algorithms import AlgorithmConfig, FilterConfig, run_path
from .bandit_env import generate_instance
from .estimators import block_plan, mean_of_medians_batch, median_batch
from .noise import NoiseModel, sample_many
from .rng import RngStream
from .theory import (
    TheoryParams,
    lemma1_failure_prob,
    median_bound,
    mom_bound,
    optimal_epsilon,
    required_sample_size,
    sample_size_terms,
    theorem1_sample_size,
)

SCHEMA_VERSION = 1

ALGORITHMS = ("oful_raw", "oful_mom", "oful_truncated", "oful_median_of_means")

_MC_CHUNK_VALUES = 4_000_000  # cap per-chunk draw memory around 32 MB


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, validated experiment description (schema version 1)."""

    d: int
    K: int
    horizon_T: int
    n_paths: int
    algorithms: tuple
    base_seed: int
    noise: str = "student_t"
    noise_df: float = None
    noise_sigma: float = None
    epsilon: float = 0.5
    n_tilde: int = 25
    v: float = 1.0
    ridge_lambda: float = 1.0
    delta: float = 0.01
    truncation_c: float = 10.0
    arm_mode: str = "fixed"
    out_dir: str = None
    schema: int = SCHEMA_VERSION

    _FIELDS = (
        "d", "K", "horizon_T", "n_paths", "algorithms", "base_seed", "noise",
        "noise_df", "noise_sigma", "epsilon", "n_tilde", "v", "ridge_lambda",
        "delta", "truncation_c", "arm_mode", "out_dir", "schema",
    )
    _REQUIRED = ("d", "K", "horizon_T", "n_paths", "algorithms", "base_seed")

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.schema != SCHEMA_VERSION:
            raise ValueError(f"config field 'schema' must be {SCHEMA_VERSION}, got {self.schema}")
        for name in ("d", "K", "horizon_T", "n_paths", "n_tilde"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"config field {name!r} must be a positive integer")
        if not self.algorithms:
            raise ValueError("config field 'algorithms' must be a nonempty list")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(
                    f"config field 'algorithms' contains unknown name {alg!r}; "
                    f"valid names: {', '.join(ALGORITHMS)}"
                )
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("config field 'epsilon' must lie in (0, 1)")
        if not (0.0 < self.delta < 1.0):
            raise ValueError("config field 'delta' must lie in (0, 1)")
        for name in ("v", "ridge_lambda", "truncation_c"):
            if not (float(getattr(self, name)) > 0):
                raise ValueError(f"config field {name!r} must be positive")
        if self.arm_mode not in ("fixed", "per_round"):
            raise ValueError("config field 'arm_mode' must be 'fixed' or 'per_round'")
        if self.out_dir is not None and not isinstance(self.out_dir, str):
            raise ValueError("config field 'out_dir' must be a string path")
        if not (0 <= int(self.base_seed) < 2**64):
            raise ValueError("config field 'base_seed' must fit in 64 bits")
        self.noise_model()  # validates the noise fields

    def noise_model(self):
        if self.noise == "student_t":
            if self.noise_df is None:
                raise ValueError("config field 'noise_df' is required when noise='student_t'")
            return NoiseModel.student_t(self.noise_df)
        if self.noise == "gaussian":
            if self.noise_sigma is None:
                raise ValueError("config field 'noise_sigma' is required when noise='gaussian'")
            return NoiseModel.gaussian(self.noise_sigma)
        raise ValueError("config field 'noise' must be 'student_t' or 'gaussian'")

    @classmethod
    def from_dict(cls, data):
        unknown = sorted(set(data) - set(cls._FIELDS))
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(unknown)}")
        missing = sorted(set(cls._REQUIRED) - set(data))
        if missing:
            raise ValueError(f"missing required config key(s): {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must hold a flat JSON object")
        return cls.from_dict(data)

    def to_dict(self):
        out = asdict(self)
        out["algorithms"] = list(self.algorithms)
        return out


def filter_for(config, algorithm):
    """The filter an algorithm name stands for, under this config."""
    if algorithm == "oful_raw":
        return FilterConfig.raw()
    if algorithm == "oful_mom":
        return FilterConfig.mean_of_medians(config.n_tilde, config.epsilon)
    if algorithm == "oful_truncated":
        return FilterConfig.truncated(config.n_tilde, config.truncation_c)
    if algorithm == "oful_median_of_means":
        return FilterConfig.median_of_means(config.n_tilde, config.epsilon)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _run_one(args):
    config, algorithm, path_index = args
    rng = RngStream(config.base_seed, path_index)
    env = generate_instance(config.d, config.K, config.noise_model(), rng)
    fcfg = filter_for(config, algorithm)
    acfg = AlgorithmConfig(
        ridge_lambda=config.ridge_lambda,
        sub_gauss_proxy_v=config.v,
        delta=config.delta,
        horizon_logical=max(1, config.horizon_T // fcfg.n_tilde),
    )
    trace = run_path(env, acfg, fcfg, config.horizon_T, rng, arm_mode=config.arm_mode)
    return algorithm, path_index, trace


@dataclass(frozen=True)
class AlgorithmAggregate:
    """Across-path summary for one algorithm, plus the per-path matrices the
    summary was reduced from (kept for cross-checking)."""

    algorithm: str
    n_pulls: int
    mean_regret: np.ndarray
    median_regret: np.ndarray
    mean_est_error: np.ndarray
    regret_paths: np.ndarray
    est_paths: np.ndarray

    @property
    def final_mean_regret(self):
        return float(self.mean_regret[-1])

    @property
    def final_median_regret(self):
        return float(self.median_regret[-1])

    @property
    def final_mean_est_error(self):
        return float(self.mean_est_error[-1])


@dataclass(frozen=True)
class AggregateReport:
    config: ExperimentConfig
    per_algorithm: dict
    metadata: dict
    traces: dict = field(repr=False, default=None)


def simulate(config, workers=1, keep_traces=False):
    """Run n_paths independent paths per configured algorithm and aggregate.

    Returns an AggregateReport; file output is a separate step
    (write_simulation_outputs) so callers can inspect results directly.
    """
    started = time.time()
    tasks = [(config, alg, p) for alg in config.algorithms for p in range(config.n_paths)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    by_alg = {alg: {} for alg in config.algorithms}
    for algorithm, path_index, trace in results:
        by_alg[algorithm][path_index] = trace
    per_algorithm = {}
    for alg in config.algorithms:
        traces = [by_alg[alg][p] for p in range(config.n_paths)]
        regret = np.vstack([t.cumulative_regret for t in traces])
        est = np.vstack([t.est_error for t in traces])
        per_algorithm[alg] = AlgorithmAggregate(
            algorithm=alg,
            n_pulls=regret.shape[1],
            mean_regret=regret.mean(axis=0),
            median_regret=np.median(regret, axis=0),
            mean_est_error=est.mean(axis=0),
            regret_paths=regret,
            est_paths=est,
        )
    metadata = {
        "schema": SCHEMA_VERSION,
        "package_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "config": config.to_dict(),
        "wall_clock_seconds": time.time() - started,
    }
    return AggregateReport(
        config=config,
        per_algorithm=per_algorithm,
        metadata=metadata,
        traces=by_alg if keep_traces else None,
    )


def _fmt(x):
    return repr(float(x))


def write_aggregate_csv(report, path):
    """Columns: algorithm, t, mean_regret, median_regret, mean_est_error."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["algorithm", "t", "mean_regret", "median_regret", "mean_est_error"])
        for alg in report.config.algorithms:
            agg = report.per_algorithm[alg]
            for t in range(agg.n_pulls):
                writer.writerow(
                    [
                        alg,
                        t + 1,
                        _fmt(agg.mean_regret[t]),
                        _fmt(agg.median_regret[t]),
                        _fmt(agg.mean_est_error[t]),
                    ]
                )


def write_trace_csv(trace, path):
    """Columns: t, arm_index, instant_regret, cumulative_regret, est_error."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "arm_index", "instant_regret", "cumulative_regret", "est_error"])
        for t in range(trace.n_pulls):
            writer.writerow(
                [
                    t + 1,
                    int(trace.arm_index[t]),
                    _fmt(trace.instant_regret[t]),
                    _fmt(trace.cumulative_regret[t]),
                    _fmt(trace.est_error[t]),
                ]
            )


def write_simulation_outputs(report, out_dir, per_pull_traces=False):
    """aggregate.csv + metadata.json (+ per-path trace CSVs when asked).

    Only metadata.json carries timing; the CSVs are byte-stable across
    reruns of the same config.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    write_aggregate_csv(report, out_dir / "aggregate.csv")
    with open(out_dir / "metadata.json", "w", encoding="utf-8") as fh:
        json.dump(report.metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if per_pull_traces:
        if report.traces is None:
            raise ValueError("per-pull traces were not kept; run simulate(keep_traces=True)")
        for alg, paths in report.traces.items():
            for p, trace in paths.items():
                write_trace_csv(trace, out_dir / f"trace_{alg}_path{p:03d}.csv")


# ---------------------------------------------------------------------------
# Monte-Carlo verification of the concentration guarantees


@dataclass(frozen=True)
class MedianCheckRow:
    m: int
    bound: float
    level: float
    coverage: float
    std_err: float
    vacuous: bool
    passed: bool


def verify_lemma1(model, m_values, trials, rng, alpha=None):
    """Empirical coverage of Pr(|median of m draws| <= 4^(1/alpha)).

    Each row passes when coverage >= level - 3 binomial standard
    errors, where level = 1 - 2*exp(-m/8); rows with level <= 0 are
    marked vacuous and pass trivially.
    """
    if alpha is None:
        alpha = model.declared_alpha
    if alpha is None:
        raise ValueError("alpha is required for a noise model with no declared tail index")
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    box = median_bound(alpha)
    rows = []
    for m in m_values:
        m = int(m)
        fail_p = lemma1_failure_prob(m)
        level = 1.0 - fail_p
        inside = 0
        remaining = trials
        chunk = max(1, _MC_CHUNK_VALUES // m)
        while remaining > 0:
            take = min(remaining, chunk)
            draws = sample_many(model, rng, take * m).reshape(take, m)
            med = median_batch(draws)
            inside += int(np.count_nonzero(np.abs(med) <= box))
            remaining -= take
        coverage = inside / trials
        vacuous = level <= 0.0
        se = 0.0 if vacuous else math.sqrt(level * (1.0 - level) / trials)
        rows.append(
            MedianCheckRow(
                m=m,
                bound=box,
                level=level,
                coverage=coverage,
                std_err=se,
                vacuous=vacuous,
                passed=vacuous or coverage >= level - 3.0 * se,
            )
        )
    return rows


@dataclass(frozen=True)
class MomCheckReport:
    n_tilde: int
    k: int
    k_prime: int
    bound: float
    level: float
    coverage: float
    std_err: float
    coverage_ok: bool
    mean: float
    mean_std_err: float
    mean_ok: bool

    @property
    def passed(self):
        return self.coverage_ok and self.mean_ok


def verify_theorem1(model, epsilon, delta, trials, rng, alpha=None, n_tilde=None):
    """Empirical coverage of the filtered-estimator envelope at level 1-delta,
    plus a symmetry check that the estimator is centred.

    n_tilde defaults to theorem1_sample_size(epsilon, delta), the
    smallest per-round count the guarantee asks for.
    """
    if alpha is None:
        alpha = model.declared_alpha
    if alpha is None:
        raise ValueError("alpha is required for a noise model with no declared tail index")
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n_tilde is None:
        n_tilde = theorem1_sample_size(epsilon, delta)
    plan = block_plan(n_tilde, epsilon)
    bound = mom_bound(alpha, epsilon, n_tilde, delta)
    values = np.empty(trials)
    done = 0
    chunk = max(1, _MC_CHUNK_VALUES // plan.n_tilde)
    while done < trials:
        take = min(trials - done, chunk)
        draws = sample_many(model, rng, take * plan.n_tilde).reshape(take, plan.n_tilde)
        values[done : done + take] = mean_of_medians_batch(draws, plan)
        done += take
    coverage = float(np.count_nonzero(np.abs(values) <= bound)) / trials
    level = 1.0 - delta
    se = math.sqrt(level * (1.0 - level) / trials)
    mean = float(values.mean())
    mean_se = float(values.std(ddof=1) / math.sqrt(trials))
    return MomCheckReport(
        n_tilde=plan.n_tilde,
        k=plan.k,
        k_prime=plan.k_prime,
        bound=bound,
        level=level,
        coverage=coverage,
        std_err=se,
        coverage_ok=coverage >= level - 3.0 * se,
        mean=mean,
        mean_std_err=mean_se,
        mean_ok=abs(mean) <= 5.0 * mean_se,
    )


# ---------------------------------------------------------------------------
# Theory table and parameter sweeps


def theory_summary(alpha, delta, horizon_T, epsilon=None):
    """Everything the theory subcommand prints, as a dict."""
    chosen_eps = epsilon if epsilon is not None else optimal_epsilon(alpha, delta, horizon_T)
    params = TheoryParams(alpha=alpha, epsilon=chosen_eps, delta=delta, horizon_T=horizon_T)
    term_c, term_horizon, term_tail = sample_size_terms(params)
    n_tilde = required_sample_size(params)
    return {
        "alpha": alpha,
        "delta": delta,
        "horizon_T": horizon_T,
        "epsilon": chosen_eps,
        "epsilon_was_optimised": epsilon is None,
        "constant_C": term_c,
        "term_horizon": term_horizon,
        "term_tail": term_tail,
        "n_tilde": n_tilde,
        "mom_bound_at_n_tilde": mom_bound(alpha, chosen_eps, n_tilde, delta),
        "exceeds_horizon": n_tilde > horizon_T,
    }


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    algorithm: str
    final_mean_regret: float
    final_median_regret: float


def sweep(parameter, grid, base_config, workers=1):
    """One simulate run per grid value of 'epsilon' or 'v'; emits the final
    mean and median regret per (value, algorithm)."""
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("sweep grid must be nonempty")
    if parameter == "epsilon":
        if any(not (0.0 < g < 1.0) for g in grid):
            raise ValueError("epsilon grid values must lie in (0, 1)")
    elif parameter == "v":
        if any(not (g > 0) for g in grid):
            raise ValueError("v grid values must be positive")
    else:
        raise ValueError(f"sweep parameter must be 'epsilon' or 'v', got {parameter!r}")
    rows = []
    for value in grid:
        config = replace(base_config, **{parameter: value})
        report = simulate(config, workers=workers)
        for alg in config.algorithms:
            agg = report.per_algorithm[alg]
            rows.append(
                SweepRow(
                    parameter=parameter,
                    value=value,
                    algorithm=alg,
                    final_mean_regret=agg.final_mean_regret,
                    final_median_regret=agg.final_median_regret,
                )
            )
    return rows


def write_sweep_csv(rows, path):
    """Columns: parameter, value, algorithm, final_mean_regret, final_median_regret."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["parameter", "value", "algorithm", "final_mean_regret", "final_median_regret"]
        )
        for row in rows:
            writer.writerow(
                [
                    row.parameter,
                    _fmt(row.value),
                    row.algorithm,
                    _fmt(row.final_mean_regret),
                    _fmt(row.final_median_regret),
                ]
            )
