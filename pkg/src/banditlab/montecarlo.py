"""Replicated error-probability estimation with parallelism-invariant streams.

Each replication owns a counter-based RNG stream keyed by (cell seed,
replication index), so the estimate is a pure reduction over replications:
identical results for any worker count or execution order. Bit-exact
reproducibility is promised per build, not across platforms' math libraries.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algorithms import ALGORITHMS, AlgoOutput
from .model import BanditInstance, InstanceAnalysis, classify_instance

__all__ = [
    "ErrorEstimate",
    "SweepResult",
    "wilson_interval",
    "error_event",
    "replication_rng",
    "derive_cell_seed",
    "estimate_error",
    "sweep",
    "ALGORITHM_ORDER",
]

# Canonical algorithm order; also fixes each algorithm's seed-derivation index
# so a single cell rerun in isolation reproduces its in-sweep result.
ALGORITHM_ORDER = ("csr", "if", "sr")

_Z95 = 1.959963984540054


def wilson_interval(errors: int, runs: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (sane for 0 errors)."""
    if runs <= 0:
        raise ValueError("runs must be positive")
    p = errors / runs
    denom = 1.0 + z * z / runs
    center = (p + z * z / (2 * runs)) / denom
    half = z * math.sqrt(p * (1.0 - p) / runs + z * z / (4.0 * runs * runs)) / denom
    # the endpoints are exactly p at the boundaries; don't let rounding drift them
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == runs else min(1.0, center + half)
    return lo, hi


def error_event(output: AlgoOutput, truth: InstanceAnalysis) -> bool:
    """True iff the recommendation or the feasibility flag is wrong."""
    return (
        output.recommended_arm != truth.optimal_arm
        or output.feasibility_flag != truth.feasible_flag
    )


def replication_rng(cell_seed: int, replication: int) -> np.random.Generator:
    """Independent counter-based stream for one replication of one cell."""
    key = np.array([cell_seed % (1 << 64), replication], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_cell_seed(base_seed: int, algorithm: str, T: int) -> int:
    """Stable per-cell seed so every (algorithm, T) cell is independent."""
    alg_index = ALGORITHM_ORDER.index(algorithm)
    ss = np.random.SeedSequence((base_seed, alg_index, T))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class ErrorEstimate:
    """Monte Carlo estimate of the error probability for one (algorithm, T) cell."""

    instance_id: str
    algorithm: str
    T: int
    runs: int
    errors: int
    e_hat: float
    log_e_hat: float
    ci_lo: float
    ci_hi: float
    base_seed: int


@dataclass(frozen=True)
class SweepResult:
    """Estimates for each requested (algorithm, T) cell plus run metadata."""

    records: tuple[ErrorEstimate, ...]
    metadata: dict = field(default_factory=dict)


def _count_errors(instance, algorithm, T, cell_seed, truth_arm, truth_flag, start, stop):
    runner = ALGORITHMS[algorithm]
    errors = 0
    for r in range(start, stop):
        out = runner(instance, T, replication_rng(cell_seed, r))
        if out.recommended_arm != truth_arm or out.feasibility_flag != truth_flag:
            errors += 1
    return errors


def estimate_error(
    instance: BanditInstance,
    algorithm: str,
    T: int,
    runs: int,
    base_seed: int,
    parallelism: int = 1,
    instance_id: str = "custom",
) -> ErrorEstimate:
    """Estimate the error probability from ``runs`` independent replications.

    Replication ``r`` uses the stream keyed by ``(base_seed, r)``; the error
    count is therefore identical for every ``parallelism`` degree.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHM_ORDER}")
    truth = classify_instance(instance)
    args = (instance, algorithm, T, base_seed, truth.optimal_arm, truth.feasible_flag)

    if parallelism <= 1 or runs < 2 * parallelism:
        errors = _count_errors(*args, 0, runs)
    else:
        chunks = min(runs, parallelism * 4)
        bounds = [(c * runs) // chunks for c in range(chunks + 1)]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [
                pool.submit(_count_errors, *args, bounds[c], bounds[c + 1])
                for c in range(chunks)
            ]
            errors = sum(f.result() for f in futures)

    e_hat = errors / runs
    lo, hi = wilson_interval(errors, runs)
    return ErrorEstimate(
        instance_id=instance_id,
        algorithm=algorithm,
        T=T,
        runs=runs,
        errors=errors,
        e_hat=e_hat,
        log_e_hat=math.log(e_hat) if errors > 0 else -math.inf,
        ci_lo=lo,
        ci_hi=hi,
        base_seed=base_seed,
    )


def sweep(
    instance: BanditInstance,
    algorithms,
    horizons,
    runs: int,
    base_seed: int,
    parallelism: int = 1,
    instance_id: str = "custom",
) -> SweepResult:
    """Run :func:`estimate_error` for every (algorithm, horizon) cell.

    Cells are ordered by (algorithm, T) with algorithms in canonical order;
    each cell's seed depends only on (base_seed, algorithm, T), so any cell can
    be reproduced in isolation.
    """
    algorithms = list(algorithms)
    horizons = list(horizons)
    if not algorithms or not horizons:
        raise ValueError("need at least one algorithm and one horizon")
    started = time.perf_counter()
    records = []
    for algorithm in sorted(algorithms, key=ALGORITHM_ORDER.index):
        for T in sorted(horizons):
            records.append(
                estimate_error(
                    instance,
                    algorithm,
                    T,
                    runs,
                    base_seed=derive_cell_seed(base_seed, algorithm, T),
                    parallelism=parallelism,
                    instance_id=instance_id,
                )
            )
    metadata = {
        "instance_id": instance_id,
        "K": instance.K,
        "tau": instance.tau,
        "a1": instance.a1,
        "a2": instance.a2,
        "arm_means": [arm.mean.tolist() for arm in instance.arms],
        "runs": runs,
        "base_seed": base_seed,
        "parallelism": parallelism,
        "wall_clock_s": time.perf_counter() - started,
    }
    return SweepResult(records=tuple(records), metadata=metadata)
