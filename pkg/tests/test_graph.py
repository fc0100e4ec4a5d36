import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cksub.graph import (Graph, as_partition, complete_graph, components, crossing_edges, cycle_graph,
                         is_connected_subset, is_minimal_separator, mask_components, mask_is_connected,
                         minimalize_separator, path_graph, separates, star_graph, tree_path)

from cases import HOUSE, P5, TWO_TRIANGLES


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_adjacency_sorted_and_symmetric():
    g = Graph(4, [(2, 0), (0, 1), (3, 0)])
    assert list(g.adj[0]) == [1, 2, 3]
    assert g.has_edge(2, 0) and g.has_edge(0, 2) and not g.has_edge(1, 2)
    assert list(g.edges) == sorted(g.edges) == [(0, 1), (0, 2), (0, 3)]


def test_components_examples():
    g = path_graph(3)
    assert components(g, {1}) == [frozenset({0}), frozenset({2})]
    assert components(g) == [frozenset({0, 1, 2})]
    assert components(g, {0, 1, 2}) == []
    assert components(TWO_TRIANGLES, {3}) == [frozenset({0, 1, 2}), frozenset({4, 5, 6})]


def test_connected_subset_examples():
    g = path_graph(3)
    assert not is_connected_subset(g, {0, 2})
    assert is_connected_subset(g, {0, 1, 2})
    assert is_connected_subset(g, set())


def test_minimalize_examples():
    assert minimalize_separator(path_graph(3), 0, 2, {1}) == {1}
    z = minimalize_separator(HOUSE, 2, 4, {3, 0, 1})
    assert is_minimal_separator(HOUSE, 2, 4, z)
    # ascending scan drops v1, then v2, leaving the cut vertex v4
    assert z == {3}
    assert minimalize_separator(star_graph(2), 1, 2, {0}) == {0}
    assert minimalize_separator(Graph(2), 0, 1, set()) == frozenset()


def test_minimalize_errors():
    with pytest.raises(ValueError):
        minimalize_separator(path_graph(3), 0, 1, set())
    with pytest.raises(ValueError):
        minimalize_separator(cycle_graph(4), 0, 2, {1})


def test_crossing_edges_examples():
    assert crossing_edges(P5, [{0, 1}, {2}, {3, 4}]) == [(1, 2), (2, 3)]
    g = cycle_graph(5)
    assert crossing_edges(g, [{v} for v in range(5)]) == list(g.edges)
    assert crossing_edges(g, [set(range(5))]) == []


def test_as_partition_validates():
    with pytest.raises(ValueError):
        as_partition(P5, [{0, 1}, {1, 2, 3, 4}])
    with pytest.raises(ValueError):
        as_partition(P5, [{0, 1}, {2}])
    with pytest.raises(ValueError):
        as_partition(P5, [{0, 1, 2, 3, 4}, set()])


def test_tree_path_and_predicates():
    assert tree_path(P5, 0, 4) == [0, 1, 2, 3, 4]
    assert star_graph(3).is_tree() and not cycle_graph(3).is_tree()
    assert complete_graph(4).is_complete() and not path_graph(3).is_complete()


def test_subgraph_relabels():
    h, ids = TWO_TRIANGLES.subgraph({3, 4, 5})
    assert ids == [3, 4, 5] and list(h.edges) == [(0, 1), (0, 2), (1, 2)]


@settings(max_examples=150, deadline=None)
@given(graphs(), st.data())
def test_components_partition_remaining(g, data):
    removed = data.draw(st.sets(st.integers(0, g.n - 1)))
    comps = components(g, removed)
    seen = set()
    for comp in comps:
        assert not (seen & comp)
        seen |= comp
        assert is_connected_subset(g, comp)
    assert seen == set(range(g.n)) - removed
    ref = nx.Graph()
    ref.add_nodes_from(set(range(g.n)) - removed)
    ref.add_edges_from((a, b) for a, b in g.edges if a not in removed and b not in removed)
    assert sorted(map(sorted, comps)) == sorted(map(sorted, nx.connected_components(ref)))


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8), st.data())
def test_minimalize_output_is_minimal(g, data):
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if not pairs:
        return
    u, v = data.draw(st.sampled_from(pairs))
    z = set(range(g.n)) - {u, v}
    out = minimalize_separator(g, u, v, z)
    assert out <= z and separates(g, u, v, out)
    assert all(not separates(g, u, v, out - {w}) for w in out)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=8))
def test_mask_helpers_agree(g):
    for mask in range(1 << g.n):
        s = {v for v in range(g.n) if mask >> v & 1}
        assert mask_is_connected(g.nbr_mask, mask) == is_connected_subset(g, s)
        assert mask_components(g.nbr_mask, mask) == len(components(g, set(range(g.n)) - s))


def test_hashable_and_equal():
    assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)]) and len({Graph(3, [(0, 1)]), Graph(3, [(0, 1)])}) == 1
