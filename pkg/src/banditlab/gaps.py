"""Pairwise suboptimality gaps, hardness indices, and small-instance rate bounds.

The gap ``delta(i, j)`` between a pair-optimal arm ``i`` and another arm ``j``
is piecewise in the arms' feasibility pattern; ``Delta(i, j)`` additionally caps
it by the pair-optimal arm's own feasibility margin ``sqrt(a2) * |tau - mu2(i)|``.
Everything here is a pure function of the configured means and (a1, a2); the
sampling covariance never enters.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:  # only for annotations; model imports this module at runtime
    from .model import BanditInstance, InstanceAnalysis

__all__ = [
    "PairOrderViolationError",
    "WrongArityError",
    "NotAllInfeasibleError",
    "GapReport",
    "LowerBoundReport",
    "AllInfeasibleRate",
    "delta_from_means",
    "pair_optimal",
    "true_delta",
    "true_Delta",
    "hardness_H1",
    "hardness_H2",
    "lb_rate_two_arm",
    "lb_rate_all_infeasible",
]

CASE_BOTH_FEASIBLE = "both-feasible"
CASE_DECEIVER = "deceiver"
CASE_INFEASIBLE_SUBOPTIMAL = "infeasible-suboptimal"
CASE_BOTH_INFEASIBLE = "both-infeasible"


class PairOrderViolationError(ValueError):
    """Raised when a gap is requested with the pair's non-optimal arm first."""


class WrongArityError(ValueError):
    """Raised when an operation requires a specific number of arms."""


class NotAllInfeasibleError(ValueError):
    """Raised by the all-infeasible rate when some arm is feasible."""


@dataclass(frozen=True)
class GapReport:
    """Gaps of arm ``j`` relative to the pair-optimal arm ``i``."""

    i: int
    j: int
    delta: float
    Delta: float
    case_label: str


@dataclass(frozen=True)
class LowerBoundReport:
    """Two-armed error decay-rate bounds.

    ``rate_theorem1`` is the constant-free ``Delta(1,2)**2`` form;
    ``rate_appendix`` carries the case-specific constants exactly as derived,
    which do not always agree with the constant-free form (the deliberately
    preserved discrepancy is visible to callers through both fields).
    """

    rate_theorem1: float
    rate_appendix: float
    case: int


@dataclass(frozen=True)
class AllInfeasibleRate:
    """Rate bound for instances where every arm violates the constraint.

    ``h1_supplementary`` is the hardness value ``K / rate`` implied by the
    convention that the pairwise gap of two infeasible arms is the smaller
    infeasibility margin; it is exposed for cross-checking only and differs
    from :func:`hardness_H1` computed with the main gap definition.
    """

    rate: float
    h1_supplementary: float


def delta_from_means(mu_i, mu_j, tau: float, a1: float, a2: float) -> tuple[float, str]:
    """Piecewise gap of ``j`` (means ``mu_j``) against pair-optimal ``i``.

    Both true and plug-in gaps are this same function, applied to configured or
    estimated attribute pairs respectively. Raises
    :class:`PairOrderViolationError` when ``i`` is infeasible but ``j`` is
    feasible, since ``i`` cannot then be pair-optimal.
    """
    mu1_i, mu2_i = float(mu_i[0]), float(mu_i[1])
    mu1_j, mu2_j = float(mu_j[0]), float(mu_j[1])
    feas_i = mu2_i <= tau
    feas_j = mu2_j <= tau
    if feas_i and feas_j:
        return math.sqrt(a1) * (mu1_j - mu1_i), CASE_BOTH_FEASIBLE
    if feas_i:
        if mu1_j <= mu1_i:
            return math.sqrt(a2) * (mu2_j - tau), CASE_DECEIVER
        return (
            max(math.sqrt(a2) * (mu2_j - tau), math.sqrt(a1) * (mu1_j - mu1_i)),
            CASE_INFEASIBLE_SUBOPTIMAL,
        )
    if not feas_j:
        return math.sqrt(a2) * (mu2_j - mu2_i), CASE_BOTH_INFEASIBLE
    raise PairOrderViolationError("first arm is infeasible while second is feasible")


def pair_optimal(instance: "BanditInstance", i: int, j: int) -> int:
    """Index of the optimal arm in the two-armed sub-instance {i, j}.

    A lone feasible arm wins regardless of mu1; two feasible arms compare mu1,
    two infeasible arms compare mu2; exact ties go to the smaller index.
    """
    if i == j:
        raise ValueError("pair_optimal needs two distinct arms")
    tau = instance.tau
    feas_i = instance.mu2[i] <= tau
    feas_j = instance.mu2[j] <= tau
    if feas_i and not feas_j:
        return i
    if feas_j and not feas_i:
        return j
    key = instance.mu1 if feas_i else instance.mu2
    if key[i] == key[j]:
        return min(i, j)
    return i if key[i] < key[j] else j


def true_delta(instance: "BanditInstance", i: int, j: int) -> float:
    """Gap ``delta(i, j)`` from the configured means; ``i`` must be pair-optimal."""
    return true_Delta(instance, i, j).delta


def true_Delta(instance: "BanditInstance", i: int, j: int) -> GapReport:
    """Gap report for the pair ``(i, j)`` with ``i`` pair-optimal.

    ``delta(i, i)`` is defined as 0 so elimination loops can treat the
    seemingly-optimal arm uniformly.
    """
    if i == j:
        return GapReport(i=i, j=j, delta=0.0, Delta=0.0, case_label=CASE_BOTH_FEASIBLE)
    if pair_optimal(instance, i, j) != i:
        raise PairOrderViolationError(f"arm {i} is not pair-optimal against arm {j}")
    mu_i = (instance.mu1[i], instance.mu2[i])
    mu_j = (instance.mu1[j], instance.mu2[j])
    delta, case = delta_from_means(mu_i, mu_j, instance.tau, instance.a1, instance.a2)
    cap = math.sqrt(instance.a2) * abs(instance.tau - mu_i[1])
    return GapReport(i=i, j=j, delta=delta, Delta=min(cap, delta), case_label=case)


def _h1_from_gaps(gaps: Iterable[float]) -> float:
    total = 0.0
    for g in gaps:
        if g == 0.0:
            return math.inf
        total += 1.0 / (g * g)
    return total


def _h2_from_gaps(gaps_by_rank: Iterable[float]) -> float:
    # rank r (1-based position past the optimal arm) carries weight r + 1
    worst = 0.0
    for r, g in enumerate(gaps_by_rank, start=2):
        if g == 0.0:
            return math.inf
        worst = max(worst, r / (g * g))
    return worst


def hardness_H1(analysis: "InstanceAnalysis") -> float:
    """Sum of inverse squared gaps to the optimal arm; +inf on any zero gap."""
    if analysis.K < 2:
        raise WrongArityError("hardness needs at least two arms")
    return _h1_from_gaps(analysis.Delta_to_opt[i] for i in analysis.ordering[1:])


def hardness_H2(analysis: "InstanceAnalysis") -> float:
    """Max over canonical positions p = 2..K of p / gap(position p)^2."""
    if analysis.K < 2:
        raise WrongArityError("hardness needs at least two arms")
    return _h2_from_gaps(analysis.Delta_to_opt[i] for i in analysis.ordering[1:])


def lb_rate_two_arm(instance: "BanditInstance") -> LowerBoundReport:
    """Error decay-rate bounds for a two-armed instance.

    Case 1: the non-optimal arm is feasible suboptimal; case 2: deceiver;
    case 3: infeasible suboptimal; case 4: the whole instance is infeasible.
    The case-specific constants are reported verbatim, including the
    inconsistent 1/2 factors across cases (cases 1-2 carry it, case 3 does
    not) and case 4's use of ``a1`` against second-coordinate means.
    """
    if instance.K != 2:
        raise WrongArityError(f"two-armed rate needs K = 2, got K = {instance.K}")
    tau, a1, a2 = instance.tau, instance.a1, instance.a2
    mu1, mu2 = instance.mu1, instance.mu2

    feas = [mu2[0] <= tau, mu2[1] <= tau]
    if (all(feas) and mu1[0] == mu1[1]) or (not any(feas) and mu2[0] == mu2[1]):
        from .model import NonUniqueOptimalError

        raise NonUniqueOptimalError("two-armed instance has no unique optimal arm")
    j = pair_optimal(instance, 0, 1)
    o = 1 - j

    report = true_Delta(instance, j, o)
    rate1 = report.Delta**2

    feas_margin = a2 * (tau - mu2[j]) ** 2
    if report.case_label == CASE_BOTH_FEASIBLE:
        case = 1
        rate_a = 0.5 * min(feas_margin, a1 * (mu1[o] - mu1[j]) ** 2 / 4.0)
    elif report.case_label == CASE_DECEIVER:
        case = 2
        rate_a = 0.5 * min(feas_margin, a2 * (mu2[o] - tau) ** 2)
    elif report.case_label == CASE_INFEASIBLE_SUBOPTIMAL:
        case = 3
        rate_a = min(feas_margin, max(a2 * (mu2[o] - tau) ** 2, a1 * (mu1[o] - mu1[j]) ** 2))
    else:
        case = 4
        rate_a = min(a1 * (mu2[o] - mu2[j]) ** 2 / 4.0, a2 * (mu2[j] - tau) ** 2)
    return LowerBoundReport(rate_theorem1=rate1, rate_appendix=rate_a, case=case)


def lb_rate_all_infeasible(instance: "BanditInstance") -> AllInfeasibleRate:
    """Rate bound when every arm strictly violates the constraint."""
    tau, a2 = instance.tau, instance.a2
    if bool((instance.mu2 <= tau).any()):
        raise NotAllInfeasibleError("instance has a feasible arm")
    gap = float(instance.mu2.min()) - tau
    rate = a2 * gap * gap
    return AllInfeasibleRate(rate=rate, h1_supplementary=instance.K / rate)
