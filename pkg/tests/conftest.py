from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lagjet.jet import Jet

# outcomes of the acceptance criteria, filled in by test_acceptance.py
ACCEPTANCE: dict = {}

small_q = st.fractions(min_value=-4, max_value=4, max_denominator=5)
nonzero_q = small_q.filter(lambda q: q != 0)


@st.composite
def jets(draw, order=None, min_order=0, max_order=6, base_point=None, invertible=False):
    n = draw(st.integers(min_order, max_order)) if order is None else order
    t0 = draw(small_q) if base_point is None else base_point
    head = draw(nonzero_q if invertible else small_q)
    rest = draw(st.lists(small_q, min_size=n, max_size=n))
    return Jet(t0, (head, *rest))


@pytest.fixture
def q():
    return Fraction


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k:2d}: {line}")
