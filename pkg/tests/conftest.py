import hypothesis
import numpy as np
import pytest

from axns.grid import GridSpec, make_grid

hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=25, derandomize=True
)
hypothesis.settings.load_profile("suite")


@pytest.fixture(scope="session")
def grid16():
    return make_grid(GridSpec(R=1.0, Lz=1.0, nr=16, nz=16))


@pytest.fixture(scope="session")
def grid32():
    return make_grid(GridSpec(R=1.0, Lz=1.0, nr=32, nz=32))


@pytest.fixture(scope="session")
def grid64():
    return make_grid(GridSpec(R=1.0, Lz=1.0, nr=64, nz=64))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
