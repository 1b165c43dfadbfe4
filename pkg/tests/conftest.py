import pytest

import mmlab as M

QUARTIC_COEFFS = (0.0, 0.0, 0.5, 0.0, 0.05)


@pytest.fixture(scope="session")
def constants():
    return M.PhysicalConstants()


@pytest.fixture(scope="session")
def osc8(constants):
    return M.build_oscillator(constants, 8)


@pytest.fixture(scope="session")
def osc64(constants):
    return M.build_oscillator(constants, 64)


@pytest.fixture(scope="session")
def quartic40(constants):
    potential = M.PolynomialPotential(QUARTIC_COEFFS)
    return M.build_from_potential(potential, constants, 160, 40)
