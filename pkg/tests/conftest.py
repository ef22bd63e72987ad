import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cpm_hedonic.graph import Graph, Partition
from cpm_hedonic.potential import Resolution

# Four nodes: a triangle 0-1-2 with a pendant 3 hanging off 0.
KITE_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2)]
# Two triangles joined by the bridge 1-4.
BRIDGED_EDGES = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (1, 4)]


@pytest.fixture
def kite() -> Graph:
    return Graph.from_edges(4, KITE_EDGES)


@pytest.fixture
def bridged() -> Graph:
    return Graph.from_edges(6, BRIDGED_EDGES)


def random_graph(rng: random.Random, n: int, density: float) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density])


def random_partition(rng: random.Random, n: int, K: int) -> Partition:
    return Partition([rng.randrange(K) for _ in range(n)], K)


def random_resolution(rng: random.Random, max_c: int = 50) -> Resolution:
    c = rng.randint(1, max_c)
    return Resolution.of(Fraction(rng.randint(0, c), c))


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def graph_and_partition(draw, min_n=1, max_n=9, max_k=5):
    g = draw(graphs(min_n, max_n))
    K = draw(st.integers(1, max_k))
    sigma = draw(st.lists(st.integers(0, K - 1), min_size=g.n, max_size=g.n))
    return g, Partition(sigma, K)


@st.composite
def resolutions(draw, max_c=30):
    c = draw(st.integers(1, max_c))
    return Resolution.of(Fraction(draw(st.integers(0, c)), c))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  {detail}")
