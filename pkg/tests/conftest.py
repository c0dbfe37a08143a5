import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from ffconsensus import FMatrix, FieldSpec

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_PRIMES = [2, 3, 5, 7]


@st.composite
def square_matrices(draw, min_n=1, max_n=4, primes=SMALL_PRIMES):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(min_n, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                         min_size=n, max_size=n))
    return FMatrix.from_rows(rows, FieldSpec(p))


@st.composite
def matrix_pairs(draw, min_n=1, max_n=4, primes=SMALL_PRIMES):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(min_n, max_n))
    cell = st.integers(0, p - 1)
    grid = st.lists(st.lists(cell, min_size=n, max_size=n), min_size=n, max_size=n)
    F = FieldSpec(p)
    return FMatrix.from_rows(draw(grid), F), FMatrix.from_rows(draw(grid), F)


@pytest.fixture
def gf3():
    return FieldSpec(3)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
