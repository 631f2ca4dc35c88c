import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from cnfgraph import ClauseSystem, ExplicitBipartiteGraph


def random_system(rng, n, n_left, n_right, p):
    """Clause system drawn with a plain numpy generator (independent of sample_cnf)."""
    left = [sum(1 << i for i in range(n) if rng.random() < p) for _ in range(n_left)]
    right = [sum(1 << i for i in range(n) if rng.random() < p) for _ in range(n_right)]
    return ClauseSystem(n, left, right)


def naive_k22(g: ExplicitBipartiteGraph):
    """Pure-Python quadruple enumeration; reference for the reference."""
    total = 0
    left = [0] * g.n_left
    right = [0] * g.n_right
    for v1, v2 in itertools.combinations(range(g.n_left), 2):
        for w1, w2 in itertools.combinations(range(g.n_right), 2):
            if all(g.has_edge(v, w) for v in (v1, v2) for w in (w1, w2)):
                total += 1
                left[v1] += 1
                left[v2] += 1
                right[w1] += 1
                right[w2] += 1
    return total, left, right


@st.composite
def clause_systems(draw, max_n=6, max_side=10):
    n = draw(st.integers(0, max_n))
    mask = st.integers(0, (1 << n) - 1)
    left = draw(st.lists(mask, max_size=max_side))
    right = draw(st.lists(mask, max_size=max_side))
    return ClauseSystem(n, left, right)


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


@pytest.fixture
def path_system():
    return ClauseSystem(1, [1, 0], [1, 0])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
