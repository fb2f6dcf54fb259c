import numpy as np
import pytest
from hypothesis import given, settings

from dagtopo.graph_core import NodeType, from_arrays
from dagtopo.layers import LAYERS, cumulative_sequence, cumulative_specs, induce, layer_spec
from dagtopo.metrics_cc import connected_components

from conftest import lenient, typed_graphs

T = NodeType


def test_builtin_layers():
    assert LAYERS["full"].types == frozenset(NodeType)
    assert LAYERS["filesystem"].types == {T.DIRECTORY, T.CONTENT}
    assert LAYERS["history"].types == {T.COMMIT, T.RELEASE}
    assert LAYERS["commit"].types == {T.COMMIT}
    assert LAYERS["hosting"].types == {T.ORIGIN, T.SNAPSHOT}
    assert len(LAYERS) == 5


def test_layer_spec_parsing():
    assert layer_spec(types="dir,cnt").types == {T.DIRECTORY, T.CONTENT}
    assert layer_spec("commit") is LAYERS["commit"]
    with pytest.raises(ValueError):
        layer_spec("nope")


def test_filesystem_example():
    # a: dir, b: cnt, c: cmt ; a -> b, c -> a
    g = from_arrays([T.DIRECTORY, T.CONTENT, T.COMMIT], [0, 2], [1, 0], labels=["a", "b", "c"])
    sub, orig = induce(g, LAYERS["filesystem"])
    assert sub.labels == ["a", "b"]
    assert list(orig) == [0, 1]
    src, dst = sub.edges()
    assert list(zip(src, dst)) == [(0, 1)]


def test_commit_layer_of_commitless_graph():
    g = from_arrays([T.DIRECTORY, T.CONTENT], [0], [1])
    sub, _ = induce(g, LAYERS["commit"])
    assert (sub.node_count, sub.edge_count) == (0, 0)


def test_full_is_identity():
    g = lenient(__import__("conftest").random_graph_arrays(11))
    sub, orig = induce(g, LAYERS["full"])
    assert sub.structurally_equal(g)
    assert np.array_equal(orig, np.arange(g.node_count))


def test_cumulative_chain_example():
    g = from_arrays([T.ORIGIN, T.SNAPSHOT, T.COMMIT], [0, 1], [1, 2])
    stages = cumulative_sequence(g)
    assert len(stages) == 6
    assert stages[0].edge_count == 0 and stages[0].node_count == 1
    assert connected_components(stages[1]).size_histogram == {2: 1}
    assert connected_components(stages[3]).size_histogram == {3: 1}
    assert stages[5].structurally_equal(g)


def test_cumulative_specs_growing():
    specs = cumulative_specs()
    assert [len(s.types) for s in specs] == [1, 2, 3, 4, 5, 6]
    assert all(a.types < b.types for a, b in zip(specs, specs[1:]))


@settings(max_examples=150, deadline=None)
@given(typed_graphs())
def test_induce_brute_force(arrays):
    g = lenient(arrays)
    full_edges = set(zip(*[a.tolist() for a in g.edges()]))
    for spec in LAYERS.values():
        sub, orig = induce(g, spec)
        tc = g.type_counts()
        assert sub.node_count == sum(tc[t] for t in spec.types)
        got = {(int(orig[s]), int(orig[d])) for s, d in zip(*sub.edges())}
        want = {(s, d) for s, d in full_edges if g.types[s] in spec.types and g.types[d] in spec.types}
        assert got == want
        assert np.array_equal(sub.types, g.types[orig])


@settings(max_examples=100, deadline=None)
@given(typed_graphs())
def test_cumulative_monotone(arrays):
    g = lenient(arrays)
    prev_nodes, prev_edges = set(), set()
    for spec in cumulative_specs():
        sub, orig = induce(g, spec)
        nodes = set(orig.tolist())
        edges = {(int(orig[s]), int(orig[d])) for s, d in zip(*sub.edges())}
        assert prev_nodes <= nodes and prev_edges <= edges
        prev_nodes, prev_edges = nodes, edges
