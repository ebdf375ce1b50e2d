import numpy as np
import pytest

from dqdpulse.hybrid_model import HybridParams, build_model_basis
from dqdpulse.propagation import TimeGrid


@pytest.fixture(scope="session")
def params():
    return HybridParams()


@pytest.fixture(scope="session")
def model(params):
    return build_model_basis(params)


@pytest.fixture()
def rng():
    # fresh seeded generator per test so ordering cannot couple tests
    return np.random.default_rng(20260817)


@pytest.fixture()
def coarse_grid():
    # 1000 steps/ns: plenty for unit tests, 10x faster than the default density
    return TimeGrid(1.3, 1300)


def random_state(rng, n=4):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)
