from math import comb

import numpy as np
import pytest
from hypothesis import given, settings

from dagtopo.graph_core import NodeType, from_arrays, undirected_neighbors
from dagtopo.metrics_degree import degrees, local_clustering

import oracles
from conftest import lenient, random_graph_arrays, typed_graphs

T = NodeType


def test_star(star):
    assert degrees(star, "out").histogram == {0: 3, 3: 1}
    assert degrees(star, "in").histogram == {0: 1, 1: 3}
    rep = degrees(star, "out")
    assert (rep.minimum, rep.maximum, rep.mean) == (0, 3, 0.75)
    assert rep.per_type[T.CONTENT] == {0: 3}


def test_empty_graph():
    g = from_arrays([], [], [])
    assert len(degrees(g, "in").histogram) == 0
    assert len(local_clustering(g).histogram) == 0


def test_bad_direction(star):
    with pytest.raises(ValueError):
        degrees(star, "sideways")


@pytest.mark.parametrize("seed", range(10))
def test_degrees_match_edge_scan(seed):
    rng = np.random.default_rng(seed)
    arrays = (rng.integers(0, 6, 100).astype(np.uint8), rng.integers(0, 100, 400), rng.integers(0, 100, 400))
    g = lenient(arrays)
    edges = oracles.simple_edges(100, arrays[1], arrays[2])
    for d in ("in", "out"):
        assert degrees(g, d).histogram == dict(oracles.degree_counts(100, edges, d))


def test_triangle_and_path():
    tri = from_arrays([T.COMMIT] * 3, [0, 1, 2], [1, 2, 0], validation="lenient")
    assert list(local_clustering(tri).values) == [1, 1, 1]
    path = from_arrays([T.COMMIT] * 3, [0, 1], [1, 2])
    assert local_clustering(path).values[1] == 0


@pytest.mark.parametrize("seed", range(10))
def test_clustering_matches_pair_scan(seed):
    rng = np.random.default_rng(100 + seed)
    arrays = (rng.integers(0, 6, 50).astype(np.uint8), rng.integers(0, 50, 300), rng.integers(0, 50, 300))
    g = lenient(arrays)
    edges = oracles.simple_edges(50, arrays[1], arrays[2])
    assert list(local_clustering(g).values) == oracles.clustering_values(50, edges)


@settings(max_examples=100, deadline=None)
@given(typed_graphs())
def test_degree_transpose_and_totals(arrays):
    g = lenient(arrays)
    gt = from_arrays(g.types, g.edges()[1], g.edges()[0], validation="lenient")
    assert degrees(g, "in").histogram == degrees(gt, "out").histogram
    for d in ("in", "out"):
        h = degrees(g, d).histogram
        assert h.total == g.node_count
        assert h.weighted_sum() == g.edge_count


@settings(max_examples=100, deadline=None)
@given(typed_graphs())
def test_clustering_bounded_by_pairs(arrays):
    g = lenient(arrays)
    vals = local_clustering(g).values
    for v in range(g.node_count):
        assert 0 <= vals[v] <= comb(len(undirected_neighbors(g, v)), 2)
    assert local_clustering(g).histogram.total == g.node_count


@settings(max_examples=100, deadline=None)
@given(typed_graphs())
def test_reciprocal_edges_change_nothing(arrays):
    g = lenient(arrays)
    src, dst = g.edges()
    both = from_arrays(g.types, np.concatenate([src, dst]), np.concatenate([dst, src]), validation="lenient")
    assert np.array_equal(local_clustering(g).values, local_clustering(both).values)


def test_threads_do_not_change_result():
    g = lenient(random_graph_arrays(5))
    assert np.array_equal(local_clustering(g, threads=1).values, local_clustering(g, threads=8).values)
