import pytest

from helpers import brute_force_two_state
from tradeoff.achievability import achievable_hull
from tradeoff.ensembles import builtin_ensemble
from tradeoff.optimizer import compute_curves


@pytest.fixture(scope="session")
def ortho():
    return builtin_ensemble("orthonormal-pair")


@pytest.fixture(scope="session")
def zero_plus():
    return builtin_ensemble("zero-plus")


@pytest.fixture(scope="session")
def ortho_curves(ortho):
    return compute_curves(ortho, 40, multistarts=8, seed=0)


@pytest.fixture(scope="session")
def zp_curves(zero_plus):
    return compute_curves(zero_plus, 40, multistarts=16, seed=0)


@pytest.fixture(scope="session")
def zp_oracle(zero_plus):
    return brute_force_two_state(zero_plus, step=0.02)


@pytest.fixture(scope="session")
def zp_hull(zp_curves):
    return achievable_hull(zp_curves)


@pytest.fixture(scope="session")
def ortho_hull(ortho_curves):
    return achievable_hull(ortho_curves)
