import numpy as np
import pytest
from hypothesis import strategies as st

from footrule_bounds.core import PairedSample

# worked example: x rank missing at position 4
TABLE1_X = [7, 3, 6, None, 2, 5, 4, 1]
TABLE1_Y = list(range(1, 9))


@pytest.fixture
def table1():
    return PairedSample.from_values(TABLE1_X, TABLE1_Y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def partial_samples(draw, n_min=1, n_max=6):
    """Random distinct values with a random missing mask."""
    n = draw(st.integers(n_min, n_max))
    x = draw(st.permutations(range(n)))
    y = draw(st.permutations(range(n)))
    xo = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    yo = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PairedSample(np.array(x, float), np.array(y, float), np.array(xo), np.array(yo))


# acceptance lines are collected here and repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
