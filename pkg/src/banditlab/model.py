"""Arm distributions, constrained bandit instances, and ground-truth analysis.

Arms are 2-dimensional Gaussians. Attribute 1 (``mu1``) is minimized, attribute 2
(``mu2``) must stay at or below a threshold ``tau``; an arm with ``mu2 <= tau`` is
feasible (the boundary counts as feasible). All arm indices in this package are
0-based; the command-line reports translate to 1-based labels for display.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EmptyInstanceError",
    "NonUniqueOptimalError",
    "BivariateGaussianArm",
    "BanditInstance",
    "ArmClass",
    "InstanceAnalysis",
    "EstimatorState",
    "sample_arm",
    "update_estimate",
    "classify_instance",
]

_SYM_TOL = 1e-12
_PSD_TOL = -1e-12


class EmptyInstanceError(ValueError):
    """Raised when an instance with zero arms is constructed or analyzed."""


class NonUniqueOptimalError(ValueError):
    """Raised when the defining argmin of the optimal arm is attained twice."""


class BivariateGaussianArm:
    """A 2-d Gaussian arm with mean ``(mu1, mu2)`` and a PSD covariance.

    Zero covariance is allowed and makes the arm deterministic (every sample
    equals the mean exactly), which is what noiseless golden tests rely on.
    """

    __slots__ = ("mean", "covariance", "_chol")

    def __init__(self, mean, covariance=None):
        mean = np.asarray(mean, dtype=np.float64)
        if mean.shape != (2,):
            raise ValueError(f"arm mean must have 2 coordinates, got shape {mean.shape}")
        if covariance is None:
            covariance = np.zeros((2, 2))
        cov = np.asarray(covariance, dtype=np.float64)
        if cov.shape != (2, 2):
            raise ValueError(f"covariance must be 2x2, got shape {cov.shape}")
        if abs(cov[0, 1] - cov[1, 0]) > _SYM_TOL:
            raise ValueError("covariance must be symmetric")
        if cov[0, 0] < 0 or cov[1, 1] < 0:
            raise ValueError("covariance diagonal must be nonnegative")
        # PSD check for a symmetric 2x2 matrix: nonnegative diagonal + determinant.
        det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
        if det < _PSD_TOL * max(1.0, cov[0, 0] * cov[1, 1]):
            raise ValueError("covariance must be positive semidefinite")
        self.mean = mean
        self.mean.setflags(write=False)
        self.covariance = cov
        self.covariance.setflags(write=False)
        self._chol = _psd_factor(cov)

    @property
    def mu1(self) -> float:
        return float(self.mean[0])

    @property
    def mu2(self) -> float:
        return float(self.mean[1])

    def marginal_variances(self) -> tuple[float, float]:
        return float(self.covariance[0, 0]), float(self.covariance[1, 1])

    def sample(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        """Draw one sample (shape ``(2,)``) or ``size`` i.i.d. samples ``(size, 2)``."""
        if size is None:
            return self.mean + self._chol @ rng.standard_normal(2)
        return self.mean + rng.standard_normal((size, 2)) @ self._chol.T

    def __repr__(self):
        return f"BivariateGaussianArm(mean={self.mean.tolist()}, covariance={self.covariance.tolist()})"


def _psd_factor(cov: np.ndarray) -> np.ndarray:
    """Lower-triangular-ish factor L with L @ L.T == cov, valid for singular PSD."""
    if not cov.any():
        return np.zeros((2, 2))
    w, v = np.linalg.eigh(cov)
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


def sample_arm(arm: BivariateGaussianArm, rng: np.random.Generator) -> np.ndarray:
    """One draw from the arm's distribution; deterministic for zero covariance."""
    return arm.sample(rng)


class BanditInstance:
    """A constrained bandit instance: arms, threshold tau, concentration params.

    ``a1`` and ``a2`` are the constants in the estimator tail bound
    ``P(|mu_hat - mu| >= d) <= 2 exp(-a n d^2)``. When omitted they default to
    ``1 / (2 * variance)`` of the matching coordinate, which is exact for the
    empirical mean of a Gaussian; this requires every arm to share marginal
    variances, and those variances to be positive.
    """

    __slots__ = ("arms", "tau", "a1", "a2", "mu1", "mu2")

    def __init__(self, arms, tau: float, a1: float | None = None, a2: float | None = None):
        arms = tuple(arms)
        if len(arms) == 0:
            raise EmptyInstanceError("an instance needs at least one arm")
        tau = float(tau)
        if not math.isfinite(tau):
            raise ValueError("tau must be finite")
        if a1 is None or a2 is None:
            derived = _derive_concentration(arms)
            a1 = derived[0] if a1 is None else a1
            a2 = derived[1] if a2 is None else a2
        a1 = float(a1)
        a2 = float(a2)
        if not (a1 > 0 and math.isfinite(a1)) or not (a2 > 0 and math.isfinite(a2)):
            raise ValueError("concentration parameters a1, a2 must be positive and finite")
        self.arms = arms
        self.tau = tau
        self.a1 = a1
        self.a2 = a2
        self.mu1 = np.array([arm.mu1 for arm in arms])
        self.mu1.setflags(write=False)
        self.mu2 = np.array([arm.mu2 for arm in arms])
        self.mu2.setflags(write=False)

    @property
    def K(self) -> int:
        return len(self.arms)

    def is_feasible(self, i: int) -> bool:
        """True feasibility of arm ``i`` (boundary inclusive)."""
        return self.arms[i].mu2 <= self.tau

    def __repr__(self):
        return f"BanditInstance(K={self.K}, tau={self.tau}, a1={self.a1}, a2={self.a2})"


def _derive_concentration(arms) -> tuple[float, float]:
    var1, var2 = arms[0].marginal_variances()
    for arm in arms[1:]:
        v1, v2 = arm.marginal_variances()
        if not (math.isclose(v1, var1, rel_tol=1e-12, abs_tol=1e-15)
                and math.isclose(v2, var2, rel_tol=1e-12, abs_tol=1e-15)):
            raise ValueError(
                "cannot derive a1/a2: arms have differing marginal variances; pass them explicitly"
            )
    if var1 <= 0 or var2 <= 0:
        raise ValueError("cannot derive a1/a2 from zero marginal variance; pass them explicitly")
    return 1.0 / (2.0 * var1), 1.0 / (2.0 * var2)


class ArmClass(enum.Enum):
    """Ground-truth role of an arm within its instance."""

    OPTIMAL = "optimal"
    FEASIBLE_SUBOPTIMAL = "feasible-suboptimal"
    DECEIVER = "deceiver"
    INFEASIBLE_SUBOPTIMAL = "infeasible-suboptimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class InstanceAnalysis:
    """Ground-truth classification plus the gap/hardness summary of an instance.

    ``ordering`` starts with the optimal arm and lists the remaining arms by
    non-decreasing gap to the optimal arm, ties broken feasible-first (feasible
    ties by mu1, infeasible ties by mu2, residual ties by index).
    """

    feasible_flag: bool
    feasible_set: tuple[int, ...]
    optimal_arm: int
    classes: tuple[ArmClass, ...]
    ordering: tuple[int, ...]
    delta_to_opt: tuple[float, ...]
    Delta_to_opt: tuple[float, ...]
    H1: float
    H2: float

    @property
    def K(self) -> int:
        return len(self.classes)


class EstimatorState:
    """Per-arm pull counts and running sums of the sampled coordinates.

    ``mu_hat`` is the coordinate-wise empirical average of everything delivered
    so far; it is undefined (error) at zero pulls.
    """

    __slots__ = ("pulls", "sums")

    def __init__(self, K: int):
        self.pulls = np.zeros(K, dtype=np.int64)
        self.sums = np.zeros((K, 2), dtype=np.float64)

    @property
    def K(self) -> int:
        return len(self.pulls)

    def update(self, arm: int, sample) -> None:
        """Fold one sample (pair of reals) into arm ``arm``'s running average."""
        self.sums[arm, 0] += sample[0]
        self.sums[arm, 1] += sample[1]
        self.pulls[arm] += 1

    def add_batch(self, arm: int, samples: np.ndarray) -> None:
        """Fold ``samples`` of shape (m, 2) into arm ``arm``'s running average."""
        self.sums[arm] += samples.sum(axis=0)
        self.pulls[arm] += samples.shape[0]

    def mu_hat(self, arm: int) -> np.ndarray:
        n = self.pulls[arm]
        if n == 0:
            raise ValueError(f"arm {arm} has no samples yet")
        return self.sums[arm] / n

    def mu1_hat(self, arm: int) -> float:
        return float(self.mu_hat(arm)[0])

    def mu2_hat(self, arm: int) -> float:
        return float(self.mu_hat(arm)[1])


def update_estimate(state: EstimatorState, arm: int, sample) -> EstimatorState:
    """Incremental form of the empirical-average estimator; returns the state."""
    state.update(arm, sample)
    return state


def classify_instance(instance: BanditInstance) -> InstanceAnalysis:
    """Classify every arm, order them canonically, and compute hardness indices.

    Requires the defining argmin (mu1 over the feasible set for feasible
    instances, mu2 over all arms otherwise) to be attained by exactly one arm;
    raises :class:`NonUniqueOptimalError` otherwise.
    """
    from . import gaps

    K = instance.K
    if K == 0:
        raise EmptyInstanceError("an instance needs at least one arm")
    tau = instance.tau
    mu1, mu2 = instance.mu1, instance.mu2

    feasible_set = tuple(i for i in range(K) if mu2[i] <= tau)
    feasible_flag = len(feasible_set) > 0
    if feasible_flag:
        best = min(mu1[i] for i in feasible_set)
        winners = [i for i in feasible_set if mu1[i] == best]
    else:
        best = mu2.min()
        winners = [i for i in range(K) if mu2[i] == best]
    if len(winners) > 1:
        raise NonUniqueOptimalError(f"optimal arm is not unique (arms {winners})")
    j = winners[0]

    classes = []
    for i in range(K):
        if i == j:
            classes.append(ArmClass.OPTIMAL)
        elif not feasible_flag:
            classes.append(ArmClass.INFEASIBLE)
        elif mu2[i] <= tau:
            classes.append(ArmClass.FEASIBLE_SUBOPTIMAL)
        elif mu1[i] <= mu1[j]:
            classes.append(ArmClass.DECEIVER)
        else:
            classes.append(ArmClass.INFEASIBLE_SUBOPTIMAL)

    delta = [0.0] * K
    Delta = [0.0] * K
    for i in range(K):
        if i == j:
            continue
        report = gaps.true_Delta(instance, j, i)
        delta[i] = report.delta
        Delta[i] = report.Delta

    def order_key(i):
        if mu2[i] <= tau:
            return (Delta[i], 0, mu1[i], i)
        return (Delta[i], 1, mu2[i], i)

    rest = sorted((i for i in range(K) if i != j), key=order_key)
    ordering = (j, *rest)

    if K >= 2:
        h1 = gaps._h1_from_gaps(Delta[i] for i in rest)
        h2 = gaps._h2_from_gaps(Delta[i] for i in rest)
    else:
        h1 = 0.0
        h2 = 0.0

    return InstanceAnalysis(
        feasible_flag=feasible_flag,
        feasible_set=feasible_set,
        optimal_arm=j,
        classes=tuple(classes),
        ordering=ordering,
        delta_to_opt=tuple(delta),
        Delta_to_opt=tuple(Delta),
        H1=h1,
        H2=h2,
    )
