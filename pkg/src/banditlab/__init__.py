"""Fixed-budget constrained best-arm identification laboratory.

A small laboratory for the pure-exploration bandit problem where one arm
attribute is minimized subject to an upper bound on a second attribute: arm
models and ground-truth analysis, pairwise gap calculus and hardness indices,
phased elimination algorithms, and a reproducible Monte Carlo harness for
estimating error probabilities.
"""

from .algorithms import (
    ALGORITHMS,
    AlgoOutput,
    BudgetTooSmallError,
    EmptyActiveSetError,
    PhaseRecord,
    PhaseSchedule,
    empirical_Delta,
    empirical_optimal,
    logbar,
    reject_arm,
    run_classical_sr,
    run_constrained_sr,
    run_infeasible_first,
    sr_schedule,
)
from .gaps import (
    AllInfeasibleRate,
    GapReport,
    LowerBoundReport,
    NotAllInfeasibleError,
    PairOrderViolationError,
    WrongArityError,
    hardness_H1,
    hardness_H2,
    lb_rate_all_infeasible,
    lb_rate_two_arm,
    pair_optimal,
    true_Delta,
    true_delta,
)
from .model import (
    ArmClass,
    BanditInstance,
    BivariateGaussianArm,
    EmptyInstanceError,
    EstimatorState,
    InstanceAnalysis,
    NonUniqueOptimalError,
    classify_instance,
    sample_arm,
    update_estimate,
)
from .montecarlo import (
    ALGORITHM_ORDER,
    ErrorEstimate,
    SweepResult,
    derive_cell_seed,
    error_event,
    estimate_error,
    replication_rng,
    sweep,
    wilson_interval,
)
from .presets import PRESETS, build_instance, instance_from_description

__version__ = "0.1.0"
