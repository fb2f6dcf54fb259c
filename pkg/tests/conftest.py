import numpy as np
import pytest
from hypothesis import strategies as st

from dagtopo import generators
from dagtopo.graph_core import NodeType, from_arrays

T = NodeType


@st.composite
def typed_graphs(draw, max_nodes=40, max_edges=120):
    """(types, src, dst) with arbitrary types and edges, cycles allowed."""
    n = draw(st.integers(0, max_nodes))
    types = np.array(draw(st.lists(st.integers(0, 5), min_size=n, max_size=n)), dtype=np.uint8)
    if n == 0:
        return types, np.zeros(0, np.int32), np.zeros(0, np.int32)
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges))
    src = np.array([a for a, _ in pairs], dtype=np.int32)
    dst = np.array([b for _, b in pairs], dtype=np.int32)
    return types, src, dst


def random_graph_arrays(seed, max_nodes=200):
    """Mixed DAG / cyclic typed graph, same recipe the acceptance suite uses."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_nodes + 1))
    m = int(rng.integers(0, 4 * n + 1))
    return generators.random_typed(n, m, seed, acyclic=bool(rng.integers(2)))


def lenient(arrays):
    return from_arrays(*arrays, validation="lenient")


@pytest.fixture
def star():
    # center -> a, b, c
    return from_arrays([T.DIRECTORY, T.CONTENT, T.CONTENT, T.CONTENT], [0, 0, 0], [1, 2, 3])


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
