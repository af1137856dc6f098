import itertools
import random

import pytest

from reccs.graph import Clustering, Graph
from reccs.params import BlockParams, block_pair_counts

# (criterion, passed, detail) rows filled by test_acceptance
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {detail}")


def graph_from(edges, n=None):
    edges = list(edges)
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(range(n), edges)


def params_for(graph, clusters, k=None, degree_target=None):
    """BlockParams over ``graph`` with hand-set connectivity requirements."""
    block_of = {v: cid for cid, members in clusters.items() for v in members}
    if degree_target is None:
        degree_target = {v: sum(1 for w in graph.adj[v] if w in block_of) for v in block_of}
    matrix = dict(sorted(block_pair_counts(graph, block_of).items()))
    if k is None:
        k = {cid: 0 for cid in clusters}
    return BlockParams(graph.n, degree_target, block_of, matrix, k)


def random_graph(rng, n, p):
    return graph_from([(u, v) for u, v in itertools.combinations(range(n), 2)
                       if rng.random() < p], n)


def random_clustered(rng, n, n_clusters, p):
    """Random graph with a random clustering; unassigned nodes are outliers."""
    g = random_graph(rng, n, p)
    nodes = list(range(n))
    rng.shuffle(nodes)
    clusters = {}
    pos = 0
    for i in range(n_clusters):
        size = rng.randint(2, 6)
        if pos + size > n:
            break
        clusters[f"c{i}"] = nodes[pos:pos + size]
        pos += size
    return g, Clustering(n, clusters)


@pytest.fixture
def rng():
    return random.Random(12345)
