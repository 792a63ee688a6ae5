"""Benchmark instance presets and the instance-description record format.

The four presets are 2-d jointly Gaussian instances sharing the covariance
[[1, 0.5], [0.5, 1]], so the derived concentration parameters are
a1 = a2 = 0.5. Replication defaults follow the benchmark convention:
100000 runs for the feasible instances, 10000 for the infeasible one.
"""

import numpy as np

from .model import BanditInstance, BivariateGaussianArm

__all__ = ["PRESETS", "PresetError", "build_instance", "instance_from_description"]

_SHARED_COV = ((1.0, 0.5), (0.5, 1.0))

# Preset name -> instance description record (the same schema the CLI accepts).
PRESETS = {
    "instance-a": {
        "name": "instance-a",
        "means": ((1.0, 0.95), (5.0, 0.001), (10.0, 0.001)),
        "covariance": _SHARED_COV,
        "tau": 1.0,
        "default_runs": 100000,
        "summary": "feasible; near-boundary optimal arm, two easy feasible arms",
    },
    "instance-b": {
        "name": "instance-b",
        "means": ((1.0, 0.995), (2.0, 1.005), (12.0, 0.001)),
        "covariance": _SHARED_COV,
        "tau": 1.0,
        "default_runs": 100000,
        "summary": "feasible; arms 1 and 2 straddle the constraint boundary",
    },
    "instance-c": {
        "name": "instance-c",
        "means": ((0.3, 0.45), (0.35, 0.45), (0.2, 0.8), (0.5, 0.8)),
        "covariance": _SHARED_COV,
        "tau": 0.5,
        "default_runs": 100000,
        "summary": "feasible; one deceiver and one infeasible suboptimal arm",
    },
    "instance-d": {
        "name": "instance-d",
        "means": ((0.3, 1.6), (0.4, 1.7), (0.2, 1.1), (0.5, 1.2)),
        "covariance": _SHARED_COV,
        "tau": 1.0,
        "default_runs": 10000,
        "summary": "infeasible; every arm violates the constraint",
    },
}


class PresetError(ValueError):
    """Raised for unknown preset names."""


def build_instance(name: str) -> BanditInstance:
    """Instantiate a preset by name."""
    if name not in PRESETS:
        raise PresetError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
    return instance_from_description(PRESETS[name])


def instance_from_description(record: dict) -> BanditInstance:
    """Build an instance from a description record.

    Required keys: ``means`` (list of [mu1, mu2] pairs), ``covariance`` (one
    shared 2x2 matrix or one per arm), ``tau``. Optional: ``a1``, ``a2``
    overrides (required when the covariance has zero marginal variance).
    """
    from .cli import ValidationError  # single user-facing validation error type

    for key in ("means", "covariance", "tau"):
        if key not in record:
            raise ValidationError(f"instance description is missing {key!r}")
    means = record["means"]
    if len(means) == 0:
        raise ValidationError("instance description needs at least one arm in 'means'")
    cov = np.asarray(record["covariance"], dtype=np.float64)
    if cov.shape == (2, 2):
        covs = [cov] * len(means)
    elif cov.shape == (len(means), 2, 2):
        covs = list(cov)
    else:
        raise ValidationError(
            "'covariance' must be a 2x2 matrix or one 2x2 matrix per arm, "
            f"got shape {cov.shape}"
        )
    try:
        arms = [BivariateGaussianArm(m, c) for m, c in zip(means, covs)]
        return BanditInstance(
            arms,
            tau=record["tau"],
            a1=record.get("a1"),
            a2=record.get("a2"),
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
