"""Graph utilities: girth, bipartite matching, matching decomposition."""
import random

import networkx as nx
import pytest

from hmplab import (
    Graph,
    decompose_regular_bipartite,
    edge_count_bound,
    girth,
    maximum_bipartite_matching,
    verify_girth,
)
from hmplab.graphs import normalize_edge, random_regular_bipartite, two_coloring

from _oracles import oracle_girth


def cycle_graph(n):
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_bipartite(a, b):
    edges = [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return Graph.from_edges(a + b, edges)


def heawood_graph():
    """Point-line incidence of the 7-point plane: 14 vertices, 3-regular."""
    from hmplab import projective_plane_family

    return projective_plane_family(2).union_graph()


def test_normalize_edge():
    assert normalize_edge(3, 1) == (1, 3)
    assert normalize_edge(1, 3) == (1, 3)
    with pytest.raises(ValueError):
        normalize_edge(2, 2)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 4)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1)])
    g = Graph.from_edges(4, [(1, 2), (2, 1)])  # duplicates collapse
    assert len(g.edges) == 1


def test_degrees_and_regularity():
    g = cycle_graph(6)
    assert g.degree(1) == 2
    assert g.regular_degree == 2
    h = Graph.from_edges(3, [(1, 2)])
    assert h.regular_degree is None


def test_two_coloring_even_and_odd_cycles():
    sides = two_coloring(cycle_graph(6))
    assert sides is not None
    left, right = sides
    assert left | right == set(range(1, 7)) and not left & right
    assert two_coloring(cycle_graph(5)) is None


@pytest.mark.parametrize(
    "graph,expected",
    [
        (cycle_graph(3), 3),
        (cycle_graph(6), 6),
        (complete_bipartite(2, 2), 4),
        (complete_bipartite(3, 3), 4),
        (heawood_graph(), 6),
        (Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)]), None),  # a path: acyclic
    ],
)
def test_girth_known_graphs(graph, expected):
    assert girth(graph) == expected


def test_girth_matches_oracle_on_random_corpus():
    rng = random.Random(7)
    checked = 0
    while checked < 150:
        n = rng.randint(3, 10)
        g = nx.gnp_random_graph(n, rng.uniform(0.2, 0.8), seed=rng.randrange(10 ** 9))
        if not g.edges:
            continue
        edges = [(u + 1, v + 1) for u, v in g.edges]
        mine = girth(Graph.from_edges(n, edges))
        assert mine == oracle_girth(n, edges)
        checked += 1


def test_verify_girth_thresholds():
    assert verify_girth(heawood_graph(), 2)  # girth 6 > 4
    assert not verify_girth(heawood_graph(), 3)  # girth 6 is not > 6
    assert not verify_girth(complete_bipartite(2, 2), 2)  # girth 4
    assert verify_girth(Graph.from_edges(4, [(1, 2), (2, 3)]), 5)  # acyclic


def test_edge_count_bound_formula():
    assert edge_count_bound(14, 2) == 90 * 2 * 14 ** (1 + 1 / 2)
    assert edge_count_bound(6, 1) == 90 * 1 * 6 ** 2
    # every girth-verified family we build sits far below the bound
    g = heawood_graph()
    assert len(g.edges) <= edge_count_bound(14, 2)


def test_maximum_bipartite_matching_complete():
    left = [1, 2, 3]
    right = [4, 5, 6]
    adj = {1: [4, 5, 6], 2: [4, 5, 6], 3: [4, 5, 6]}
    m = maximum_bipartite_matching(left, right, adj)
    assert len(m) == 3
    assert len(set(m.values())) == 3


def test_maximum_bipartite_matching_partial():
    # vertex 2 and 3 compete for 5: maximum is 2
    adj = {1: [4], 2: [5], 3: [5]}
    m = maximum_bipartite_matching([1, 2, 3], [4, 5], adj)
    assert len(m) == 2


def test_decompose_cycle_six():
    parts = decompose_regular_bipartite(cycle_graph(6))
    assert len(parts) == 2
    _assert_decomposition(cycle_graph(6), parts)


def test_decompose_k33():
    g = complete_bipartite(3, 3)
    parts = decompose_regular_bipartite(g)
    assert len(parts) == 3
    _assert_decomposition(g, parts)


def test_decompose_heawood():
    g = heawood_graph()
    parts = decompose_regular_bipartite(g)
    assert len(parts) == 3
    _assert_decomposition(g, parts)


def test_decompose_rejects_irregular_and_odd():
    with pytest.raises(ValueError):
        decompose_regular_bipartite(Graph.from_edges(4, [(1, 2), (2, 3)]))
    with pytest.raises(ValueError):
        decompose_regular_bipartite(cycle_graph(5))


def test_decompose_random_regular_bipartite():
    rng = random.Random(11)
    for _ in range(12):
        half = rng.randint(2, 12)
        degree = rng.randint(1, min(4, half))
        g = random_regular_bipartite(2 * half, degree, rng)
        assert g.regular_degree == degree
        parts = decompose_regular_bipartite(g)
        assert len(parts) == degree
        _assert_decomposition(g, parts)


def test_random_regular_bipartite_validation():
    with pytest.raises(ValueError):
        random_regular_bipartite(5, 1, 0)  # odd n
    with pytest.raises(ValueError):
        random_regular_bipartite(6, 4, 0)  # degree > n/2


def _assert_decomposition(g, parts):
    """Perfect, pairwise disjoint, union-exact."""
    seen = set()
    for matching in parts:
        covered = set()
        for u, v in matching:
            assert normalize_edge(u, v) in g.edges
            assert u not in covered and v not in covered
            covered.update((u, v))
            assert (u, v) not in seen
            seen.add((u, v))
        assert covered == set(range(1, g.n + 1))
    assert seen == set(g.edges)
