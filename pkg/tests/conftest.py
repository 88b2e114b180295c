import pytest

from invsemi import io as sio
from invsemi.catalog import bundled_catalog
from invsemi.lattice import determinability_hypotheses
from invsemi.munn import munn_semigroup
from invsemi.semigroup import FiniteInverseSemigroup

# (criterion, verdict, detail) lines collected by tests/test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


def semilattice_semigroup(E):
    return FiniteInverseSemigroup(E.meet, labels=E.labels)


@pytest.fixture(scope="session")
def catalog():
    return bundled_catalog().members


@pytest.fixture(scope="session")
def catalog4(catalog):
    return [S for S in catalog if S.order <= 4]


@pytest.fixture(scope="session")
def qualifying(catalog):
    return [S for S in catalog if all(determinability_hypotheses(S).values())]


@pytest.fixture(scope="session")
def brandt5():
    return sio.load_sgp(sio.bundled_text("brandt5.sgp"))


@pytest.fixture(scope="session")
def figure1():
    return sio.parse_slt(sio.bundled_text("figure1.slt"))


@pytest.fixture(scope="session")
def figure1_munn(figure1):
    return munn_semigroup(figure1)


@pytest.fixture(scope="session")
def chain2():
    return FiniteInverseSemigroup([[0, 0], [0, 1]])


@pytest.fixture(scope="session")
def z2():
    return FiniteInverseSemigroup([[0, 1], [1, 0]])
