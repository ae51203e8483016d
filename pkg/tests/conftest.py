import pytest

from lgcy.birkhoff import birkhoff_factorize
from lgcy.coeff import build_constant_pool
from lgcy.umatrix import build_u_matrix

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def pool():
    return build_constant_pool(256, 6)


@pytest.fixture(scope="session")
def pool320():
    return build_constant_pool(320, 6)


@pytest.fixture(scope="session")
def U4(pool):
    return build_u_matrix(pool, 4)


@pytest.fixture(scope="session")
def U5(pool):
    return build_u_matrix(pool, 5)


@pytest.fixture(scope="session")
def factors(U4):
    return birkhoff_factorize(U4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
