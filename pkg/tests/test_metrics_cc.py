import numpy as np
import pytest
from hypothesis import given, settings

from dagtopo.generators import layered, to_graph
from dagtopo.graph_core import NodeType, from_arrays
from dagtopo.layers import LAYERS, cumulative_sequence, induce
from dagtopo.metrics_cc import (
    commit_counts,
    connected_components,
    origin_weighted_size_distribution,
    write_membership_csv,
)

import oracles
from conftest import lenient, typed_graphs

T = NodeType


def test_two_disjoint_edges():
    r = connected_components(from_arrays([T.COMMIT] * 4, [0, 2], [1, 3]))
    assert r.size_histogram == {2: 2}
    assert r.component_count == 2
    assert list(r.labels) == [0, 0, 1, 1]


def test_direction_ignored():
    r = connected_components(from_arrays([T.COMMIT] * 3, [0, 2], [1, 1]))
    assert r.size_histogram == {3: 1}


def test_empty():
    r = connected_components(from_arrays([], [], []))
    assert (r.component_count, r.largest_size, r.isolated_origin_count) == (0, 0, 0)


def test_isolated_origins():
    g = from_arrays([T.ORIGIN, T.ORIGIN, T.SNAPSHOT, T.ORIGIN], [1], [2])
    r = connected_components(g)
    assert r.isolated_origin_count == 2
    assert list(r.origin_weight) == [1, 1, 1]


@pytest.mark.parametrize("seed", range(10))
def test_partition_matches_union_find(seed):
    rng = np.random.default_rng(seed)
    n = 200
    arrays = (rng.integers(0, 6, n).astype(np.uint8), rng.integers(0, n, 150), rng.integers(0, n, 150))
    g = lenient(arrays)
    r = connected_components(g)
    groups = oracles.union_find_components(n, oracles.simple_edges(n, arrays[1], arrays[2]))
    got = [list(np.flatnonzero(r.labels == c)) for c in range(r.component_count)]
    assert got == groups


def test_weighted_distribution_examples():
    # {ori, snp, cmt} and {dir, cnt}
    g = from_arrays([T.ORIGIN, T.SNAPSHOT, T.COMMIT, T.DIRECTORY, T.CONTENT], [0, 1, 3], [1, 2, 4])
    r = connected_components(g)
    assert origin_weighted_size_distribution(r, False, g) == {3: 1}
    assert origin_weighted_size_distribution(r, True, g) == {3: 1}
    g = from_arrays([T.ORIGIN, T.ORIGIN, T.SNAPSHOT, T.COMMIT, T.DIRECTORY], [0, 1, 2, 3], [2, 2, 3, 4])
    r = connected_components(g)
    assert origin_weighted_size_distribution(r, False, g) == {5: 2}


def test_require_commit_filters():
    g = from_arrays([T.ORIGIN, T.SNAPSHOT, T.ORIGIN, T.SNAPSHOT, T.COMMIT], [0, 2, 3], [1, 3, 4])
    r = connected_components(g)
    assert origin_weighted_size_distribution(r, False, g) == {2: 1, 3: 1}
    assert origin_weighted_size_distribution(r, True, g) == {3: 1}


@pytest.mark.parametrize("seed", range(5))
def test_origin_weights_brute_force(seed):
    g = lenient(__import__("conftest").random_graph_arrays(seed + 50))
    r = connected_components(g)
    for c in range(r.component_count):
        members = np.flatnonzero(r.labels == c)
        assert r.origin_weight[c] == sum(1 for v in members if g.types[v] == T.ORIGIN)
        assert commit_counts(r, g)[c] == sum(1 for v in members if g.types[v] == T.COMMIT)


@settings(max_examples=150, deadline=None)
@given(typed_graphs())
def test_invariants(arrays):
    g = lenient(arrays)
    r = connected_components(g)
    assert r.size_histogram.weighted_sum() == g.node_count
    if g.node_count:
        assert r.largest_size == r.size_histogram.max()
    assert r.origin_weight.sum() == g.type_counts()[T.ORIGIN]
    # ids ascending by smallest member
    mins = [int(np.flatnonzero(r.labels == c)[0]) for c in range(r.component_count)]
    assert mins == sorted(mins)
    for spec in LAYERS.values():
        sub, orig = induce(g, spec)
        rs = connected_components(sub)
        for c in range(rs.component_count):
            parents = set(r.labels[orig[rs.labels == c]].tolist())
            assert len(parents) == 1
    largest = [connected_components(s).largest_size for s in cumulative_sequence(g)]
    assert largest == sorted(largest)


def test_layered_graph_monotone():
    g = to_graph(layered(3000, 20000, seed=1))
    largest = [connected_components(s).largest_size for s in cumulative_sequence(g)]
    assert largest == sorted(largest)


def test_membership_csv(tmp_path):
    r = connected_components(from_arrays([T.COMMIT] * 3, [1], [2]))
    write_membership_csv(r, tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_text() == "node_id,component_id\n0,0\n1,1\n2,1\n"
