import functools
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from rigidlie.catalog import load_catalog
from rigidlie.poly import Polynomial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def shipped_catalog():
    return {e.name: e for e in load_catalog()}


@pytest.fixture(scope="session")
def catalog():
    return shipped_catalog()


@pytest.fixture(scope="session")
def rigid_entries(catalog):
    return [e for e in catalog.values() if e.kind == "rigid"]


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def polynomials(draw, nvars=3, max_degree=3, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        mono = tuple(draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars)))
        terms[mono] = draw(rationals)
    return Polynomial(nvars, terms)


def points(nvars):
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                    min_size=nvars, max_size=nvars)


def F(x):
    return Fraction(x)


ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[criterion])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
