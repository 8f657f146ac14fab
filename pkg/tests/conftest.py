import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hgeom.subgroups import HORIZONTAL, VERTICAL, make_subgroup

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def plane():
    """Vertical plane {(0, y, t)} in H^1."""
    return make_subgroup(VERTICAL, [[0.0, 1.0]], 1)


@pytest.fixture
def xline():
    """Horizontal line {(x, 0, 0)} in H^1."""
    return make_subgroup(HORIZONTAL, [[1.0, 0.0]], 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
