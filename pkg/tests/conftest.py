import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ymlattice.lattice import build_torus

settings.register_profile(
    "ymlattice", deadline=None, max_examples=15, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ymlattice")

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def cx2():
    return build_torus(2, 2, 2)


@pytest.fixture(scope="session")
def cx3():
    return build_torus(3, 3, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        for line in ACCEPTANCE_LINES[k]:
            tr.write_line(line)
