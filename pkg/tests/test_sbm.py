import math

import numpy as np
import pytest

from reccs.graph import Clustering, GraphError
from reccs.params import BlockParams, OutlierParams
from reccs.rng import RngStream
from reccs.sbm import (MultigraphDraw, draw_block_edges, sample_dcsbm,
                       sample_outlier_network, simplify)


def block_params(n, blocks, degrees, matrix):
    block_of = {v: b for b, members in blocks.items() for v in members}
    return BlockParams(n, degrees, block_of, matrix, {b: 0 for b in blocks})


def three_sigma(p, n):
    return 3 * math.sqrt(p * (1 - p) / n)


def test_single_block_multinomial():
    # one block {0, 1}, degrees (1, 1): endpoints independent and uniform,
    # so P(0-1) = 1/2 and P(self-loop at 0) = P(self-loop at 1) = 1/4
    n_draws = 10_000
    p = block_params(2, {"a": [0, 1]}, {0: 1, 1: 1}, {("a", "a"): n_draws})
    draw = sample_dcsbm(p, RngStream(1, "test"))
    a = np.minimum(draw.u, draw.v)
    b = np.maximum(draw.u, draw.v)
    freq = {
        (0, 1): np.mean((a == 0) & (b == 1)),
        (0, 0): np.mean((a == 0) & (b == 0)),
        (1, 1): np.mean((a == 1) & (b == 1)),
    }
    for key, expected in {(0, 1): 0.5, (0, 0): 0.25, (1, 1): 0.25}.items():
        assert abs(freq[key] - expected) < three_sigma(expected, n_draws), key


def test_empty_matrix():
    p = block_params(3, {"a": [0, 1, 2]}, {0: 1, 1: 1, 2: 0}, {})
    draw = sample_dcsbm(p, RngStream(1))
    assert len(draw) == 0
    g, rep = simplify(draw)
    assert (g.n, g.m, rep.removed) == (3, 0, 0)


def test_forced_parallel_edges():
    p = block_params(2, {"a": [0], "b": [1]}, {0: 5, 1: 5}, {("a", "b"): 5})
    draw = sample_dcsbm(p, RngStream(2))
    assert draw.edges() == [(0, 1)] * 5
    g, rep = simplify(draw)
    assert g.edge_set() == {(0, 1)}
    assert rep.parallel == 4
    assert rep.removed_by_pair == {("a", "b"): 4}


def test_infeasible_block():
    p = block_params(3, {"a": [0, 1], "b": [2]}, {0: 1, 1: 1, 2: 0}, {("a", "b"): 1})
    with pytest.raises(GraphError, match="infeasible"):
        sample_dcsbm(p, RngStream(0))


def test_micro_canonical_counts():
    blocks = {"a": [0, 1, 2, 3], "b": [4, 5, 6], "c": [7, 8, 9, 10, 11]}
    deg = {v: 1 + v % 4 for v in range(12)}
    matrix = {("a", "a"): 4, ("a", "b"): 3, ("b", "c"): 6, ("c", "c"): 2, ("a", "c"): 1}
    p = block_params(12, blocks, deg, matrix)
    block_of = p.block_of
    for i in range(50):
        draw = sample_dcsbm(p, RngStream(i, "mc"))
        assert draw.pair_counts() == matrix
        got = {}
        for u, v in draw.edges():
            key = tuple(sorted((block_of[u], block_of[v])))
            got[key] = got.get(key, 0) + 1
        assert got == {tuple(sorted(k)): m for k, m in matrix.items()}


def test_degree_proportional_endpoints():
    n_draws = 20_000
    p = block_params(3, {"a": [0, 1], "b": [2]}, {0: 2, 1: 1, 2: 1}, {("a", "b"): n_draws})
    draw = sample_dcsbm(p, RngStream(4))
    share = np.mean(draw.u == 0)
    assert abs(share - 2 / 3) < 3 * math.sqrt((2 / 9) / n_draws)


def test_same_seed_same_draw():
    p = block_params(6, {"a": [0, 1, 2], "b": [3, 4, 5]}, dict.fromkeys(range(6), 3),
                     {("a", "a"): 3, ("a", "b"): 3, ("b", "b"): 3})
    d1 = sample_dcsbm(p, RngStream(11, "x"))
    d2 = sample_dcsbm(p, RngStream(11, "x"))
    d3 = sample_dcsbm(p, RngStream(11, "y"))
    assert d1.edges() == d2.edges()
    assert d1.edges() != d3.edges()


def test_simplify_examples():
    draw = MultigraphDraw([0, 1], np.array([0, 0, 0]), np.array([0, 1, 1]),
                          [(("a", "a"), 0, 3)])
    g, rep = simplify(draw)
    assert g.edge_set() == {(0, 1)}
    assert (rep.self_loops, rep.parallel) == (1, 1)
    assert g.m + rep.removed == len(draw)

    simple = MultigraphDraw([0, 1, 2], np.array([0, 1]), np.array([1, 2]))
    g, rep = simplify(simple)
    assert g.edge_set() == {(0, 1), (1, 2)}
    assert rep.removed == 0


def test_simplify_counts_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        u = rng.integers(0, 8, 40)
        v = rng.integers(0, 8, 40)
        g, rep = simplify(MultigraphDraw(list(range(8)), u, v, [(("x", "x"), 0, 40)]))
        g.validate()
        assert g.m + rep.removed == 40
        assert g.edge_set() == {(min(a, b), max(a, b)) for a, b in zip(u, v) if a != b}


def outlier_params(oo=(), counts=None, attach=None):
    counts = counts or {}
    return OutlierParams([3, 4, 5], list(oo), counts, {}, attach or {})


def test_outlier_network_reproduces_outlier_edges():
    c = Clustering(6, {"c1": [0, 1, 2]})
    g, rep = sample_outlier_network(outlier_params([(4, 5)]), c, RngStream(0))
    assert g.edge_set() == {(4, 5)}


def test_outlier_network_cluster_draws():
    c = Clustering(6, {"c1": [0, 1, 2]})
    for seed in range(20):
        g, rep = sample_outlier_network(
            outlier_params(counts={(4, "c1"): 2}, attach={0: 1, 1: 2, 2: 1}), c, RngStream(seed))
        assert g.adj[4] <= {0, 1, 2}
        assert 1 <= len(g.adj[4]) <= 2
        assert len(g.adj[4]) + rep.parallel == 2


def test_outlier_network_empty_and_unknown_cluster():
    c = Clustering(6, {"c1": [0, 1, 2]})
    g, _ = sample_outlier_network(outlier_params(), c, RngStream(0))
    assert (g.n, g.m) == (6, 0)
    with pytest.raises(GraphError, match="unknown cluster"):
        sample_outlier_network(outlier_params(counts={(4, "zz"): 1}), c, RngStream(0))


def test_outlier_zero_weight_cluster_falls_back_to_uniform():
    c = Clustering(6, {"c1": [0, 1, 2]})
    g, _ = sample_outlier_network(outlier_params(counts={(3, "c1"): 1}), c, RngStream(0))
    assert len(g.adj[3]) == 1


def test_draw_block_edges_weights_respected():
    draw = draw_block_edges({"a": [0, 1, 2]}, {0: 0, 1: 1, 2: 0}, [(("a", "a"), 10)],
                            RngStream(0), [0, 1, 2])
    assert set(draw.u.tolist()) | set(draw.v.tolist()) == {1}
