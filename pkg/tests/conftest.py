import pytest

from lekac.borel_chain import reflection_chain
from lekac.hamiltonian import LE, LEBAR, build_algebra
from lekac.typicality import check_le_theorem, check_theorem


@pytest.fixture(scope="session")
def lebar25():
    return build_algebra(LEBAR, 2, 5)


@pytest.fixture(scope="session")
def le25():
    return build_algebra(LE, 2, 5)


@pytest.fixture(scope="session")
def lebar15():
    return build_algebra(LEBAR, 1, 5)


@pytest.fixture(scope="session")
def chain25(lebar25):
    return reflection_chain(lebar25)


@pytest.fixture(scope="session")
def sweep25():
    """Full sweep at (2,5): Kac modules, heads, chain highest weights, le verdicts."""
    return check_theorem(2, 5, "all", chain=True, le=True)


@pytest.fixture(scope="session")
def sweep15():
    return check_theorem(1, 5, "all")


@pytest.fixture(scope="session")
def sweep17():
    return check_theorem(1, 7, "all")


@pytest.fixture(scope="session")
def le_sweep25():
    return check_le_theorem(2, 5)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE = {}


def report(k, ok, detail):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} — {detail}"
    ACCEPTANCE[k] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
