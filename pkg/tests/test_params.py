import random

import pytest

from reccs.graph import Clustering, GraphError, induced_subgraph
from reccs.mincut import min_edge_cut, min_edge_cut_bruteforce
from reccs.params import (extract_block_params, extract_outlier_params, load_params,
                          params_from_json, params_to_json, save_params)

from conftest import graph_from, random_clustered


def two_triangles():
    g = graph_from([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    return g, Clustering(6, {"c1": [0, 1, 2], "c2": [3, 4, 5]})


def test_two_triangles():
    g, c = two_triangles()
    p = extract_block_params(g, c)
    assert p.edge_count_matrix == {("c1", "c1"): 3, ("c2", "c2"): 3}
    assert set(p.degree_target.values()) == {2}
    # k from the brute-force oracle on each triangle
    expected = {cid: min_edge_cut_bruteforce(induced_subgraph(g, m)).cut_size
                for cid, m in c.clusters.items()}
    assert p.connectivity_req == expected == {"c1": 2, "c2": 2}


def test_single_edge_cluster():
    g = graph_from([(0, 1)], 3)
    p = extract_block_params(g, Clustering(3, {"c": [0, 1]}))
    assert p.edge_count_matrix == {("c", "c"): 1}
    assert p.degree_target == {0: 1, 1: 1}
    assert p.connectivity_req == {"c": 1}


def test_size_two_cluster_without_edge_has_k0():
    g = graph_from([(0, 2)], 3)
    p = extract_block_params(g, Clustering(3, {"c": [0, 1]}))
    assert p.connectivity_req == {"c": 0}


def test_inter_cluster_count():
    g = graph_from([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    p = extract_block_params(g, Clustering(5, {"c1": [0, 1, 2], "c2": [3, 4]}))
    assert p.edge_count_matrix[("c1", "c2")] == 1
    assert p.edge_count_matrix[("c2", "c2")] == 1


def test_nothing_to_model():
    with pytest.raises(GraphError, match="nothing to model"):
        extract_block_params(graph_from([(0, 1)]), Clustering(2, {}))


def test_outlier_params_example():
    g = graph_from([(0, 1), (1, 2), (0, 2), (4, 5), (4, 0)], 6)
    c = Clustering(6, {"c1": [0, 1, 2]})
    o = extract_outlier_params(g, c)
    assert o.outlier_ids == [3, 4, 5]
    assert o.outlier_outlier_edges == [(4, 5)]
    assert o.outlier_block_counts == {(4, "c1"): 1}
    assert o.outlier_degree_target[4] == 2
    assert o.outlier_degree_target[5] == 1


def test_no_outliers():
    g, c = two_triangles()
    o = extract_outlier_params(g, c)
    assert o.outlier_ids == []
    assert o.outlier_outlier_edges == []
    assert o.outlier_block_counts == {}
    assert o.outlier_degree_target == {}


def test_outlier_double_edge_into_cluster():
    g = graph_from([(0, 1), (1, 2), (4, 0), (4, 1)], 5)
    o = extract_outlier_params(g, Clustering(5, {"c1": [0, 1, 2]}))
    assert o.outlier_block_counts == {(4, "c1"): 2}


def test_reconstruction_identity_and_invariants():
    rng = random.Random(99)
    for _ in range(60):
        g, c = random_clustered(rng, rng.randint(6, 30), rng.randint(1, 5), rng.random() * 0.5)
        if not c.clusters:
            continue
        p = extract_block_params(g, c)
        o = extract_outlier_params(g, c)
        assert g.m == (sum(p.edge_count_matrix.values()) + len(o.outlier_outlier_edges)
                       + sum(o.outlier_block_counts.values()))
        g_c = induced_subgraph(g, c.clustered_nodes())
        assert sum(p.edge_count_matrix.values()) == g_c.m
        assert sum(p.degree_target.values()) == 2 * g_c.m
        for cid, members in c.clusters.items():
            assert p.connectivity_req[cid] == min_edge_cut(induced_subgraph(g, members)).cut_size
        outliers = set(o.outlier_ids)
        assert all(u in outliers or v in outliers for u, v in o.outlier_outlier_edges)
        assert all(m >= 1 for m in o.outlier_block_counts.values())
        # deterministic read-off
        assert extract_block_params(g, c) == p


def test_json_round_trip(tmp_path):
    rng = random.Random(5)
    g, c = random_clustered(rng, 25, 4, 0.3)
    p = extract_block_params(g, c)
    o = extract_outlier_params(g, c)
    save_params(p, o, tmp_path / "p.json")
    p2, o2 = load_params(tmp_path / "p.json")
    assert p2.degree_target == p.degree_target
    assert p2.block_of == p.block_of
    assert p2.edge_count_matrix == p.edge_count_matrix
    assert p2.connectivity_req == p.connectivity_req
    assert o2 == o
    save_params(p2, o2, tmp_path / "p2.json")
    assert (tmp_path / "p.json").read_bytes() == (tmp_path / "p2.json").read_bytes()


def test_json_rejects_foreign_file():
    with pytest.raises(GraphError):
        params_from_json({"format": "other"})
    g, c = two_triangles()
    data = params_to_json(extract_block_params(g, c), extract_outlier_params(g, c))
    assert data["block"]["connectivity_req"] == {"c1": 2, "c2": 2}
