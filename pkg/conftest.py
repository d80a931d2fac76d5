import math
import pathlib
import numpy as np
import pytest
from leslie import coefficients, fields
from leslie.verify import helpers

SUPPORT = pathlib.Path(__file__).parent / "tests" / "support"


@pytest.fixture
def support_config():
    return SUPPORT / "config"


@pytest.fixture
def grid():
    return fields.Grid(32, 2 * math.pi)


@pytest.fixture
def fine_grid():
    return fields.Grid(64, 2 * math.pi)


@pytest.fixture
def leslie_example():
    return coefficients.LeslieCoefficients(
        0.0, -1.0, 2.0, 2.0, 0.0, 1.0, gamma=0.5, reynolds=1.0
    )


@pytest.fixture
def derived_example(leslie_example):
    return coefficients.derive(leslie_example)


@pytest.fixture
def frank():
    return coefficients.ElasticConstants(1.2, 1.0, 0.8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def smooth_director(rng, fine_grid):
    return helpers.random_director(rng, fine_grid)


@pytest.fixture
def smooth_velocity(rng, fine_grid):
    return helpers.random_velocity(rng, fine_grid)


@pytest.fixture
def resolved_grid():
    return fields.Grid(128, 2 * math.pi)


@pytest.fixture
def resolved_director(rng, resolved_grid):
    """
    Random director on a grid that resolves the tails of its normalization.
    """
    return helpers.random_director(rng, resolved_grid)


@pytest.fixture
def resolved_velocity(rng, resolved_grid):
    return helpers.random_velocity(rng, resolved_grid)
