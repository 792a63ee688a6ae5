import numpy as np
import pytest

from banditlab import BanditInstance, BivariateGaussianArm
from banditlab.presets import PRESETS

ZERO_COV = ((0.0, 0.0), (0.0, 0.0))


def make_instance(means, tau, cov=ZERO_COV, a1=0.5, a2=0.5):
    arms = [BivariateGaussianArm(m, cov) for m in means]
    return BanditInstance(arms, tau=tau, a1=a1, a2=a2)


def noiseless_preset(name):
    """Preset means/tau with zero covariance: every sample equals the mean."""
    record = PRESETS[name]
    return make_instance(record["means"], record["tau"])


def random_instance(rng, K=None, force_infeasible=False):
    """Random instance with continuous attributes (ties have probability zero)."""
    K = int(K if K is not None else rng.integers(2, 9))
    mu1 = rng.uniform(0.0, 4.0, size=K)
    mu2 = rng.uniform(0.0, 2.0, size=K)
    tau = -0.1 if force_infeasible else float(rng.uniform(0.2, 1.8))
    means = np.column_stack([mu1, mu2])
    return make_instance(means, tau, a1=float(rng.uniform(0.2, 2.0)), a2=float(rng.uniform(0.2, 2.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
