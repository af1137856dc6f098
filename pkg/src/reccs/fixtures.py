"""Synthetic clustered networks for tests, benchmarks and demos.

Clusters get power-law sizes and heterogeneous (Chung-Lu) degrees. Each
cluster is seeded with a random spanning tree so the planted clustering is
connected, mimicking a clustering post-processed for connectivity.
A fraction ``mu`` of clustered edges cross clusters, and outlier nodes are
attached with a few edges each.
"""

from __future__ import annotations

import numpy as np

from .graph import Clustering, Graph
from .rng import RngStream


def _power_law_ints(rng: np.random.Generator, size: int, lo: int, hi: int,
                    exponent: float) -> np.ndarray:
    u = rng.random(size)
    a = 1.0 - exponent
    x = (lo ** a + u * ((hi + 1) ** a - lo ** a)) ** (1.0 / a)
    return np.clip(np.floor(x).astype(np.int64), lo, hi)


def clustered_fixture(seed: int, n_clusters: int | None = None,
                      cluster_range: tuple[int, int] = (10, 200),
                      size_range: tuple[int, int] = (2, 100),
                      mean_degree: float = 6.0, mu: float = 0.2,
                      outlier_fraction: float = 0.1,
                      outlier_degree: tuple[int, int] = (1, 4),
                      size_exponent: float = 1.5,
                      degree_exponent: float = 2.5) -> tuple[Graph, Clustering]:
    """Random clustered graph; returns the graph and its planted clustering."""
    rng = RngStream(seed, "fixture").np
    if n_clusters is None:
        n_clusters = int(rng.integers(cluster_range[0], cluster_range[1] + 1))
    sizes = _power_law_ints(rng, n_clusters, size_range[0], size_range[1], size_exponent)
    n_clustered = int(sizes.sum())
    n_out = int(round(outlier_fraction * n_clustered))
    n = n_clustered + n_out
    perm = rng.permutation(n)
    members = np.split(perm[:n_clustered], np.cumsum(sizes)[:-1])
    outliers = np.sort(perm[n_clustered:])

    weight = np.zeros(n)
    weight[:] = _power_law_ints(rng, n, 1, 50, degree_exponent)
    graph = Graph.empty(n, labels=[str(i) for i in range(n)])

    pairs_u: list[np.ndarray] = []
    pairs_v: list[np.ndarray] = []
    for nodes in members:
        s = len(nodes)
        order = rng.permutation(nodes)
        # random recursive tree: node i attaches to an earlier node
        parents = order[(rng.random(s - 1) * np.arange(1, s)).astype(np.int64)]
        pairs_u.append(order[1:])
        pairs_v.append(parents)
        target = int(round(min(mean_degree * (1 - mu), s - 1) * s / 2)) - (s - 1)
        if target > 0:
            p = weight[nodes] / weight[nodes].sum()
            pairs_u.append(rng.choice(nodes, size=target, p=p))
            pairs_v.append(rng.choice(nodes, size=target, p=p))
    intra = int(sum(len(x) for x in pairs_u))

    block = np.full(n, -1)
    for i, nodes in enumerate(members):
        block[nodes] = i
    n_inter = int(round(intra * mu / (1 - mu))) if mu < 1 else 0
    if n_inter and n_clusters > 1:
        clustered = perm[:n_clustered]
        p = weight[clustered] / weight[clustered].sum()
        u = rng.choice(clustered, size=2 * n_inter, p=p)
        v = rng.choice(clustered, size=2 * n_inter, p=p)
        keep = block[u] != block[v]
        pairs_u.append(u[keep][:n_inter])
        pairs_v.append(v[keep][:n_inter])
    if n_out:
        lo, hi = outlier_degree
        k = rng.integers(lo, hi + 1, size=n_out)
        src = np.repeat(outliers, k)
        p = weight / weight.sum()
        dst = rng.choice(n, size=len(src), p=p)
        pairs_u.append(src)
        pairs_v.append(dst)

    for u, v in zip(np.concatenate(pairs_u).tolist(), np.concatenate(pairs_v).tolist()):
        if u != v:
            graph.add_edge(u, v)
    clusters = {str(i): sorted(nodes.tolist()) for i, nodes in enumerate(members)
                if len(nodes) >= 2}
    return graph, Clustering(n, clusters)


def random_partition_fixture(seed: int, n_clusters: int | None = None,
                             cluster_range: tuple[int, int] = (10, 200),
                             size_range: tuple[int, int] = (2, 100),
                             p_in: float = 0.3, inter_edges_per_node: float = 1.0,
                             outlier_fraction: float = 0.1,
                             outlier_degree: tuple[int, int] = (1, 4)) -> tuple[Graph, Clustering]:
    """Uniform cluster sizes with G(n, p_in) inside clusters.

    Clusters may come out disconnected (k(C) = 0), which the repair
    pipeline must tolerate.
    """
    rng = RngStream(seed, "random-partition").np
    if n_clusters is None:
        n_clusters = int(rng.integers(cluster_range[0], cluster_range[1] + 1))
    sizes = rng.integers(size_range[0], size_range[1] + 1, size=n_clusters)
    n_clustered = int(sizes.sum())
    n_out = int(round(outlier_fraction * n_clustered))
    n = n_clustered + n_out
    perm = rng.permutation(n)
    members = np.split(perm[:n_clustered], np.cumsum(sizes)[:-1])
    graph = Graph.empty(n, labels=[str(i) for i in range(n)])
    for nodes in members:
        s = len(nodes)
        iu, iv = np.triu_indices(s, 1)
        hit = rng.random(len(iu)) < p_in
        for u, v in zip(nodes[iu[hit]].tolist(), nodes[iv[hit]].tolist()):
            graph.add_edge(u, v)
    clustered = perm[:n_clustered]
    m_inter = int(round(inter_edges_per_node * n_clustered / 2))
    for u, v in zip(rng.choice(clustered, m_inter).tolist(), rng.choice(clustered, m_inter).tolist()):
        if u != v:
            graph.add_edge(u, v)
    if n_out:
        k = rng.integers(outlier_degree[0], outlier_degree[1] + 1, size=n_out)
        src = np.repeat(perm[n_clustered:], k)
        for u, v in zip(src.tolist(), rng.choice(n, len(src)).tolist()):
            if u != v:
                graph.add_edge(u, v)
    clusters = {str(i): sorted(nodes.tolist()) for i, nodes in enumerate(members)
                if len(nodes) >= 2}
    return graph, Clustering(n, clusters)
