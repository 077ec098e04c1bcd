"""Shared fixtures: cached prime tables and density grids.

The big sieves and the delay-ODE solves are the session's expensive shared
artifacts; build them once and hand the same immutable objects to every test.
"""

import numpy as np
import pytest

from kfree import primes


@pytest.fixture(scope="session")
def table_1e6():
    return primes.sieve_primes(10**6)


@pytest.fixture(scope="session")
def table_1e7():
    return primes.sieve_primes(10**7)


@pytest.fixture(scope="session")
def table_1e8():
    return primes.sieve_primes(10**8)


@pytest.fixture(scope="session")
def rho_grid_1():
    from kfree import dickman

    return dickman.solve_rho(1.0, u_max=15.0, step=1e-3)


@pytest.fixture(scope="session")
def rho_grid_15():
    from kfree import dickman

    return dickman.solve_rho(1.5, u_max=15.0, step=1e-3)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
