import numpy as np
import pytest

from vigap.core import l1_regularizer, tikhonov
from vigap.problems import example_5_1

XSTAR = np.array([0.0, -0.75, -0.25])  # common regularized solution for phi = l1
X0 = np.array([1.0, -2.0, 1.0])        # default benchmark start point


@pytest.fixture(scope="session")
def ba_problem():
    """Best-approximation instance (shared; it is immutable)."""
    return example_5_1()


@pytest.fixture(scope="session")
def l2():
    return tikhonov()


@pytest.fixture(scope="session")
def l1():
    return l1_regularizer()
