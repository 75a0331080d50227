import functools

import pytest
from hypothesis import settings

from e2surf import catenoid, helicoid
from e2surf.group import MetricParams

# reproducible property tests; numerical examples can be slow on a loaded machine
settings.register_profile("e2surf", derandomize=True, deadline=None)
settings.load_profile("e2surf")


@functools.lru_cache(maxsize=None)
def helicoid_profile(l1, l2, K):
    return helicoid.solve_profile(MetricParams(l1, l2), K)


@functools.lru_cache(maxsize=None)
def catenoid_profile(l1, l2, c):
    return catenoid.closed_profile(MetricParams(l1, l2), c)


@pytest.fixture(scope="session")
def flat_helicoid():
    return helicoid_profile(1.0, 1.0, 0.5)


@pytest.fixture(scope="session")
def aniso_helicoid():
    return helicoid_profile(2.0, 1.0, 0.5)


@pytest.fixture(scope="session")
def flat_catenoid():
    return catenoid_profile(1.0, 1.0, 2.0)


@pytest.fixture(scope="session")
def aniso_catenoid():
    return catenoid_profile(2.0, 1.0, 2.0)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
