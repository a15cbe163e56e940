import numpy as np
import pytest

from divlab.rand import random_density, random_positive_definite


@pytest.fixture
def rho_sigma_qubits():
    """A fixed non-commuting qubit pair."""
    rho = random_density(2, 2, 101)
    sigma = random_density(2, 2, 202)
    return rho, sigma


@pytest.fixture
def pd_pair_3():
    a = random_positive_definite(3, (0.2, 4.0), 11)
    b = random_positive_definite(3, (0.2, 4.0), 12)
    return a, b


def assert_close(actual, expected, tol=1e-10, msg=""):
    __tracebackhide__ = True
    err = abs(actual - expected)
    assert err <= tol, f"{msg} |{actual} - {expected}| = {err:.3e} > {tol:.1e}"


def commuting_pair(eigs_r, eigs_s):
    return np.diag(eigs_r).astype(complex), np.diag(eigs_s).astype(complex)
