import numpy as np
import pytest

from wigner_qsl.grids import PhaseGrid, UniformGrid1D
from wigner_qsl.states import OscillatorParams


@pytest.fixture(scope="session")
def params():
    return OscillatorParams(M=1.0, hbar=1.0, omega0=1.0, omega1=2.0)


@pytest.fixture(scope="session")
def xgrid64():
    return UniformGrid1D(-10.0, 10.0, 64)


@pytest.fixture(scope="session")
def xgrid256():
    return UniformGrid1D(-10.0, 10.0, 256)


@pytest.fixture(scope="session")
def square_grid256():
    axis = UniformGrid1D(-10.0, 10.0, 256)
    return PhaseGrid(axis, axis)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
