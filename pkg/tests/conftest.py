import random

import pytest
from hypothesis import strategies as st

from tropcurves.puiseux import PuiseuxSeries


@pytest.fixture
def rng():
    return random.Random(12345)


small_q = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def exact_series(draw, max_terms=4, nonzero=False):
    exps = draw(st.lists(st.fractions(min_value=-3, max_value=5, max_denominator=2), max_size=max_terms, unique=True))
    coefs = draw(st.lists(small_q.filter(lambda q: q != 0), min_size=len(exps), max_size=len(exps)))
    s = PuiseuxSeries(list(zip(exps, coefs)))
    if nonzero and s.is_zero():
        s = PuiseuxSeries.constant(1)
    return s


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
