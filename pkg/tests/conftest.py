import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gaussian_modes():
    from josephson_kit import potentials, wellmodes
    return wellmodes.solve_lowest_modes(potentials.harmonic_gaussian_barrier())


@pytest.fixture(scope="session")
def square_modes():
    from josephson_kit import potentials, wellmodes
    return wellmodes.solve_lowest_modes(potentials.square_double_well())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
