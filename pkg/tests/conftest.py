import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from conewh.cones import cone_from_generators


@pytest.fixture(scope="session")
def quarter():
    return cone_from_generators([(1, 0), (0, 1)])


@pytest.fixture(scope="session")
def half_line():
    return cone_from_generators([(1,)], 1)


@pytest.fixture(scope="session")
def simplicial():
    return cone_from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


@pytest.fixture(scope="session")
def fourgonal():
    return cone_from_generators([(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)])


@pytest.fixture(scope="session")
def skew():
    return cone_from_generators([(1, 0), (1, 1)])
