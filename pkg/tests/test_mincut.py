import itertools
import random

import pytest

from reccs.graph import Graph, GraphError
from reccs.mincut import (connected_components, crossing_edges, min_edge_cut,
                          min_edge_cut_bruteforce)

from conftest import graph_from, random_graph


def cycle(n):
    return graph_from([(i, (i + 1) % n) for i in range(n)], n)


def complete(n):
    return graph_from(itertools.combinations(range(n), 2), n)


def test_components_examples():
    assert connected_components(complete(3)) == [{0, 1, 2}]
    assert connected_components(graph_from([(0, 1), (2, 3)])) == [{0, 1}, {2, 3}]
    assert connected_components(Graph.empty(4)) == [{0}, {1}, {2}, {3}]


def test_components_order_by_size():
    g = graph_from([(0, 1), (2, 3), (3, 4)], 6)
    assert connected_components(g) == [{2, 3, 4}, {0, 1}, {5}]


def test_bruteforce_matches_hand_enumeration():
    # C_5: every bipartition crosses an even number >= 2 of cycle edges
    c5 = cycle(5)
    best = min(crossing_edges(c5, set(side))
               for r in range(1, 5) for side in itertools.combinations(range(5), r))
    assert best == 2
    assert min_edge_cut_bruteforce(c5).cut_size == 2
    assert min_edge_cut_bruteforce(complete(4)).cut_size == 3
    assert min_edge_cut_bruteforce(graph_from([(0, 1)])).cut_size == 1


def test_min_cut_examples():
    assert min_edge_cut(cycle(5)).cut_size == 2
    assert min_edge_cut(graph_from([(0, 1), (1, 2)])).cut_size == 1
    two_triangles = graph_from([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    res = min_edge_cut(two_triangles)
    assert res.cut_size == 0
    assert res.side_a == {0, 1, 2}


def test_disconnected_side_a_is_largest_component():
    g = graph_from([(0, 1), (2, 3), (3, 4), (4, 2)], 6)
    res = min_edge_cut(g)
    assert res.cut_size == 0
    assert res.side_a == {2, 3, 4}
    assert res.side_b == {0, 1, 5}


def test_guards():
    with pytest.raises(GraphError):
        min_edge_cut(Graph.empty(1))
    with pytest.raises(GraphError):
        min_edge_cut_bruteforce(Graph.empty(21))


def test_subgraph_ids_preserved():
    g = Graph([10, 11, 12, 13], [(10, 11), (11, 12), (12, 13), (13, 10), (10, 12)])
    res = min_edge_cut(g)
    assert res.cut_size == 2
    assert res.side_a | res.side_b == {10, 11, 12, 13}


def test_agrees_with_bruteforce_on_random_graphs():
    rng = random.Random(7)
    for _ in range(300):
        g = random_graph(rng, rng.randint(2, 12), rng.random())
        fast = min_edge_cut(g)
        slow = min_edge_cut_bruteforce(g)
        assert fast.cut_size == slow.cut_size
        # sides partition the node set and realize the reported size
        assert fast.side_a | fast.side_b == set(g.nodes())
        assert not fast.side_a & fast.side_b
        assert fast.side_a and fast.side_b
        assert crossing_edges(g, fast.side_a) == fast.cut_size
        assert fast.cut_size <= min(g.degree(v) for v in g.nodes())
        assert (fast.cut_size == 0) == (len(connected_components(g)) > 1)


def test_larger_graphs_against_networkx():
    nx = pytest.importorskip("networkx")
    rng = random.Random(3)
    for n in (30, 60, 90):
        for p in (0.1, 0.3):
            g = random_graph(rng, n, p)
            G = nx.Graph(list(g.edges()))
            G.add_nodes_from(range(n))
            expected = nx.stoer_wagner(G)[0] if nx.is_connected(G) else 0
            assert min_edge_cut(g).cut_size == expected
