"""Shared fixtures of the test suite."""

import logging

import numpy as np
import pytest

from polydamage.fem import generate_structured
from polydamage.models import MaterialModel


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def propagate_logs():
    # main() detaches the package logger from the root; caplog listens on the root
    logger = logging.getLogger("polydamage")
    logger.propagate = True
    yield
    logger.propagate = True


@pytest.fixture
def unit_square():
    """One 1 x 1 quadrilateral."""
    return generate_structured((0.0, 0.0, 1.0, 1.0), 1, 1)


@pytest.fixture
def grid2():
    """2 x 2 grid over the unit square."""
    return generate_structured((0.0, 0.0, 1.0, 1.0), 2, 2)


@pytest.fixture
def concrete():
    """Mazars concrete in plane stress."""
    return MaterialModel(E=20000.0, nu=0.2, plane="stress", criterion="mazars",
                         alpha=0.98, beta=300.0, kappa0=1e-4)


@pytest.fixture
def concrete_von_mises():
    return MaterialModel(E=25850.0, nu=0.18, plane="strain", criterion="von_mises",
                         k=10.0, alpha=0.98, beta=350.0, kappa0=2.7 / 25850.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
