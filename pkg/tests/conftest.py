import pytest

import ramcube as rc


@pytest.fixture(scope="session")
def lps513():
    """The 6-regular graph on 2184 vertices from primes={5}, N1=13."""
    return rc.build_complex([5], 13)


@pytest.fixture(scope="session")
def cover513():
    """The (6,14)-regular square complex from primes={5,13}, N1=3."""
    return rc.build_complex([5, 13], 3)


@pytest.fixture(scope="session")
def x511():
    """primes={5}, N1=11: parity double cover, section kernel of order 2."""
    return rc.build_complex([5], 11)
