import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from minsum import ClassParams, Scenario, Summand

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def summand(x, y, mu, big_l):
    return Summand(np.array([float(x), float(y)]), ClassParams(mu, big_l))


@pytest.fixture
def smooth_pair():
    # two smooth summands with different curvature ratios
    return Scenario((summand(-1, 0, 1.0, 5.0), summand(1, 0, 1.0, 15.0)))


@pytest.fixture
def mixed_pair():
    # one smooth summand against one merely strongly convex
    return Scenario((summand(-1, 0, 1.0, 4.0), summand(1, 0, 3.0, math.inf)))


@pytest.fixture
def bounded_pair():
    # two nonsmooth summands under a finite gradient cap
    return Scenario(
        (summand(-1, 0, 1.75, math.inf), summand(1, 0, 2.0, math.inf)), bound_B=3.0
    )


@pytest.fixture
def bounded_pair_flat():
    # same but the second summand is only convex (mu = 0)
    return Scenario(
        (summand(-1, 0, 1.75, math.inf), summand(1, 0, 0.0, math.inf)), bound_B=3.0
    )
