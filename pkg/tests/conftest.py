import numpy as np
import pytest
from hypothesis import settings, strategies as st

from bpmeasures import TruthTable

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def table_from_int(n, v):
    N = 1 << n
    bits = [(v >> (N - 1 - i)) & 1 for i in range(N)]
    return TruthTable(n, 2, np.array(bits, dtype=np.uint8))


def all_tables(n):
    return [table_from_int(n, v) for v in range(1 << (1 << n))]


@st.composite
def boolean_tables(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    return TruthTable(n, 2, np.array(bits, dtype=np.uint8))


@st.composite
def tables_with_subset(draw, min_n=1, max_n=4):
    f = draw(boolean_tables(min_n, max_n))
    A = draw(st.sets(st.integers(0, f.n - 1)))
    return f, tuple(sorted(A))


@pytest.fixture(scope="session")
def n3_tables():
    return all_tables(3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, line = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {line}")
