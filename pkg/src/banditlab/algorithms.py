"""Fixed-budget elimination algorithms over the Successive-Rejects schedule.

All three algorithms share the same phase schedule and differ only in which
arm they drop at the end of a phase:

* ``csr`` drops the arm with the largest estimated gap to the empirically
  optimal arm, with a feasibility-aware tie-break;
* ``if`` drops the most infeasible-looking arm, falling back to the most
  suboptimal-looking one when everything looks feasible (random tie-break);
* ``sr`` ignores the constraint and drops the largest empirical objective.

Estimates accumulate across phases; nothing is reset. A run consumes its own
RNG stream, so replications can execute concurrently without shared state.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gaps import delta_from_means
from .model import BanditInstance, EstimatorState

__all__ = [
    "BudgetTooSmallError",
    "EmptyActiveSetError",
    "PhaseSchedule",
    "PhaseRecord",
    "AlgoOutput",
    "logbar",
    "sr_schedule",
    "empirical_optimal",
    "empirical_Delta",
    "reject_arm",
    "run_constrained_sr",
    "run_infeasible_first",
    "run_classical_sr",
    "ALGORITHMS",
]


class BudgetTooSmallError(ValueError):
    """Raised when the budget cannot fund at least one pull per phase."""


class EmptyActiveSetError(ValueError):
    """Raised when an elimination step is asked about zero surviving arms."""


def logbar(K: int) -> float:
    """The schedule normalizer 1/2 + sum_{i=2..K} 1/i."""
    return float(_logbar_exact(K))


def _logbar_exact(K: int) -> Fraction:
    return Fraction(1, 2) + sum((Fraction(1, i) for i in range(2, K + 1)), Fraction(0))


@dataclass(frozen=True)
class PhaseSchedule:
    """Cumulative per-arm pull targets ``n[0..K-1]`` with ``n[0] = 0``.

    After phase k every surviving arm has exactly ``n[k]`` pulls. The targets
    are non-decreasing (strictly increasing once the budget is comfortably
    above the minimum) and respect ``n[1] + ... + n[K-2] + 2 n[K-1] <= T``.
    """

    K: int
    T: int
    logbar_K: float
    n: tuple[int, ...]


def sr_schedule(K: int, T: int) -> PhaseSchedule:
    """Phase schedule for ``K`` arms and budget ``T``; needs ``T >= K + 1``."""
    if K < 2:
        raise ValueError("a phase schedule needs at least two arms")
    if T < K + 1:
        raise BudgetTooSmallError(f"budget {T} too small for K={K} arms (minimum {K + 1})")
    lb = _logbar_exact(K)
    n = [0]
    for k in range(1, K):
        exact = Fraction(T - K) / (lb * (K + 1 - k))
        n.append(-(-exact.numerator // exact.denominator))  # exact ceiling
    return PhaseSchedule(K=K, T=T, logbar_K=float(lb), n=tuple(n))


def empirical_optimal(state: EstimatorState, active, tau: float) -> int:
    """The arm that currently looks optimal among ``active``.

    Feasible-looking arms (``mu2_hat <= tau``) compete on ``mu1_hat``; if none
    looks feasible the least infeasible-looking arm wins. Exact ties go to the
    smallest index. Every active arm needs at least one pull.
    """
    active = sorted(active)
    if not active:
        raise EmptyActiveSetError("no active arms")
    feasible = [i for i in active if state.mu2_hat(i) <= tau]
    if feasible:
        return min(feasible, key=lambda i: (state.mu1_hat(i), i))
    return min(active, key=lambda i: (state.mu2_hat(i), i))


def empirical_Delta(
    state: EstimatorState, j_hat: int, i: int, tau: float, a1: float, a2: float
) -> float:
    """Plug-in gap of arm ``i`` relative to the empirically optimal ``j_hat``."""
    if i == j_hat:
        return 0.0
    mu_j = state.mu_hat(j_hat)
    delta, _ = delta_from_means(mu_j, state.mu_hat(i), tau, a1, a2)
    cap = math.sqrt(a2) * abs(tau - float(mu_j[1]))
    return float(min(cap, delta))


def _csr_rejection(state, active, tau, a1, a2):
    j_hat = empirical_optimal(state, active, tau)
    gaps = {i: empirical_Delta(state, j_hat, i, tau, a1, a2) for i in active if i != j_hat}
    worst = max(gaps.values())
    tied = [i for i in sorted(gaps) if gaps[i] == worst]
    if len(tied) == 1:
        return tied[0], j_hat, gaps
    infeasible_looking = [i for i in tied if state.mu2_hat(i) > tau]
    if infeasible_looking:
        rejected = max(infeasible_looking, key=lambda i: (state.mu2_hat(i), -i))
    else:
        rejected = max(tied, key=lambda i: (state.mu1_hat(i), -i))
    return rejected, j_hat, gaps


def reject_arm(state: EstimatorState, active, tau: float, a1: float, a2: float) -> int:
    """Arm the gap-based rule drops from ``active`` (needs >= 2 active arms).

    The largest plug-in gap loses; on a tie, the most infeasible-looking tied
    arm goes first, else the most suboptimal-looking feasible one; residual
    exact ties go to the smallest index. Never returns the empirically
    optimal arm.
    """
    active = list(active)
    if len(active) < 2:
        raise EmptyActiveSetError("rejection needs at least two active arms")
    return _csr_rejection(state, active, tau, a1, a2)[0]


@dataclass(frozen=True)
class PhaseRecord:
    """One rejection event: phase index (1-based), dropped arm, leader, scores."""

    phase: int
    rejected: int
    j_hat: int
    gaps: dict[int, float]


@dataclass(frozen=True)
class AlgoOutput:
    """Recommendation tuple: the surviving arm and its apparent feasibility."""

    recommended_arm: int
    feasibility_flag: bool
    trace: tuple[PhaseRecord, ...] | None = None


def _run_elimination(instance, T, rng, select_reject, trace):
    K = instance.K
    tau = instance.tau
    if K == 1:
        # No phases exist; spend the whole budget on the lone arm.
        if T < 1:
            raise BudgetTooSmallError("budget must allow at least one pull")
        state = EstimatorState(1)
        state.add_batch(0, instance.arms[0].sample(rng, T))
        flag = state.mu2_hat(0) <= tau
        return AlgoOutput(0, bool(flag), trace=() if trace else None)

    schedule = sr_schedule(K, T)
    state = EstimatorState(K)
    active = list(range(K))
    records = [] if trace else None
    for k in range(1, K):
        new = schedule.n[k] - schedule.n[k - 1]
        if new > 0:
            for i in active:
                state.add_batch(i, instance.arms[i].sample(rng, new))
        rejected, j_hat, gaps = select_reject(state, active, rng)
        active.remove(rejected)
        if trace:
            records.append(PhaseRecord(phase=k, rejected=rejected, j_hat=j_hat, gaps=gaps))
    survivor = active[0]
    flag = state.mu2_hat(survivor) <= tau
    return AlgoOutput(survivor, bool(flag), trace=tuple(records) if trace else None)


def run_constrained_sr(
    instance: BanditInstance, T: int, rng: np.random.Generator, trace: bool = False
) -> AlgoOutput:
    """Gap-based elimination with the feasibility-aware tie-break."""
    tau, a1, a2 = instance.tau, instance.a1, instance.a2

    def select(state, active, _rng):
        return _csr_rejection(state, active, tau, a1, a2)

    return _run_elimination(instance, T, rng, select, trace)


def run_infeasible_first(
    instance: BanditInstance, T: int, rng: np.random.Generator, trace: bool = False
) -> AlgoOutput:
    """Drop the worst-looking constraint violator; ties resolved at random."""
    tau = instance.tau

    def select(state, active, rng):
        violators = [i for i in active if state.mu2_hat(i) > tau]
        if violators:
            scores = {i: state.mu2_hat(i) for i in violators}
        else:
            scores = {i: state.mu1_hat(i) for i in active}
        worst = max(scores.values())
        tied = [i for i in sorted(scores) if scores[i] == worst]
        rejected = tied[0] if len(tied) == 1 else tied[int(rng.integers(len(tied)))]
        return rejected, empirical_optimal(state, active, tau), scores

    return _run_elimination(instance, T, rng, select, trace)


def run_classical_sr(
    instance: BanditInstance, T: int, rng: np.random.Generator, trace: bool = False
) -> AlgoOutput:
    """Constraint-blind baseline: drop the largest empirical objective.

    The feasibility flag is still computed against tau so outputs stay
    comparable with the constraint-aware algorithms.
    """

    def select(state, active, _rng):
        scores = {i: state.mu1_hat(i) for i in active}
        rejected = max(sorted(active), key=lambda i: (scores[i], -i))
        leader = min(sorted(active), key=lambda i: (scores[i], i))
        return rejected, leader, scores

    return _run_elimination(instance, T, rng, select, trace)


ALGORITHMS = {
    "csr": run_constrained_sr,
    "if": run_infeasible_first,
    "sr": run_classical_sr,
}
