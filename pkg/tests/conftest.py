from importlib import resources

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weakcsr.core import BOTTOM, Matrix, Vector
from weakcsr.digraph import from_matrix, is_nontrivial, is_strongly_connected
from weakcsr.io import parse_instance

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow,
                                                 HealthCheck.filter_too_much])
settings.load_profile("default")

FIXTURE = resources.files("weakcsr") / "data" / "separator5.txt"

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split()[0]), k)):
        ok, detail = ACCEPTANCE_LINES[key]
        status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"criterion {key}: {status}  {detail}".rstrip())


@pytest.fixture(scope="session")
def a5() -> Matrix:
    return parse_instance(FIXTURE.read_text()).matrix


def irreducible(A: Matrix) -> bool:
    G = from_matrix(A)
    return is_strongly_connected(G) and is_nontrivial(G, G.nodes)


entries = st.one_of(st.just(BOTTOM), st.integers(-9, 9))


@st.composite
def matrices(draw, n_min=1, n_max=4, elements=entries):
    n = draw(st.integers(n_min, n_max))
    return Matrix([[draw(elements) for _ in range(n)] for _ in range(n)])


@st.composite
def irreducible_matrices(draw, n_min=1, n_max=4, elements=entries):
    A = draw(matrices(n_min, n_max, elements))
    from hypothesis import assume
    assume(irreducible(A))
    return A


@st.composite
def square_pairs(draw, n_max=4):
    n = draw(st.integers(1, n_max))
    mk = lambda: Matrix([[draw(entries) for _ in range(n)] for _ in range(n)])
    return mk(), mk(), mk()


@st.composite
def vectors(draw, n):
    return Vector([draw(st.integers(-9, 9)) for _ in range(n)])
