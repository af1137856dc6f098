"""Connected components and exact global minimum edge cuts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError

BRUTEFORCE_MAX_NODES = 20


@dataclass(frozen=True)
class CutResult:
    cut_size: int
    side_a: frozenset[int]
    side_b: frozenset[int]


def connected_components(graph: Graph) -> list[set[int]]:
    """Components by decreasing size, ties by smallest node id."""
    seen: set[int] = set()
    comps = []
    adj = graph.adj
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def crossing_edges(graph: Graph, side: set[int] | frozenset[int]) -> int:
    """Number of edges with exactly one endpoint in ``side``."""
    return sum(1 for u in side for w in graph.adj[u] if w not in side)


def _stoer_wagner(weights: np.ndarray) -> tuple[int, list[int]]:
    """Stoer-Wagner on a dense symmetric weight matrix.

    Returns the cut value and the local indices on one side of a minimum cut.
    Each phase runs a maximum adjacency ordering over the remaining merged
    vertices; the last vertex added gives a cut-of-the-phase.
    """
    w = weights.astype(np.int64, copy=True)
    n = len(w)
    groups = [[i] for i in range(n)]
    active = list(range(n))
    best = None
    best_side: list[int] = []
    removed = np.iinfo(np.int64).min // 2
    while len(active) > 1:
        idx = np.asarray(active)
        sub = w[np.ix_(idx, idx)]
        key = sub[0].copy()
        key[0] = removed
        prev = last = 0
        phase_cut = 0
        for _ in range(len(idx) - 1):
            j = int(key.argmax())
            phase_cut = int(key[j])
            prev, last = last, j
            key += sub[j]
            key[j] = removed
        s, t = active[prev], active[last]
        if best is None or phase_cut < best:
            best = phase_cut
            best_side = list(groups[t])
            if best == 0:
                break
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0
        groups[s].extend(groups[t])
        active.remove(t)
    return int(best), best_side


def min_edge_cut(graph: Graph) -> CutResult:
    """Exact minimum edge cut of ``graph`` over its own node set.

    A disconnected graph has cut size 0 with its largest component as side_a.
    """
    nodes = sorted(graph.adj)
    if len(nodes) < 2:
        raise GraphError("edge connectivity is undefined for fewer than 2 nodes")
    comps = connected_components(graph)
    if len(comps) > 1:
        side_a = frozenset(comps[0])
        return CutResult(0, side_a, frozenset(nodes) - side_a)

    # min cut <= min degree; a leaf or a 2-node graph is settled directly
    v_min = min(nodes, key=lambda v: (len(graph.adj[v]), v))
    if len(graph.adj[v_min]) == 1 or len(nodes) == 2:
        side_a = frozenset(nodes) - {v_min}
        return CutResult(len(graph.adj[v_min]), side_a, frozenset([v_min]))

    local = {v: i for i, v in enumerate(nodes)}
    mat = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    rows = []
    cols = []
    for u in nodes:
        iu = local[u]
        for w in graph.adj[u]:
            rows.append(iu)
            cols.append(local[w])
    mat[rows, cols] = 1
    size, side = _stoer_wagner(mat)
    side_b = frozenset(nodes[i] for i in side)
    side_a = frozenset(nodes) - side_b
    if len(side_b) > len(side_a):
        side_a, side_b = side_b, side_a
    return CutResult(size, side_a, side_b)


def min_edge_cut_bruteforce(graph: Graph) -> CutResult:
    """Minimum cut by enumerating every bipartition. Test oracle only."""
    nodes = sorted(graph.adj)
    n = len(nodes)
    if n < 2:
        raise GraphError("edge connectivity is undefined for fewer than 2 nodes")
    if n > BRUTEFORCE_MAX_NODES:
        raise GraphError(f"brute-force cut limited to {BRUTEFORCE_MAX_NODES} nodes")
    local = {v: i for i, v in enumerate(nodes)}
    # node 0 always on the "0" side; masks cover nodes 1..n-1, all-zero excluded
    masks = np.arange(1, 2 ** (n - 1), dtype=np.int64) << 1
    counts = np.zeros(len(masks), dtype=np.int64)
    for u, v in graph.edges():
        a, b = local[u], local[v]
        counts += ((masks >> a) ^ (masks >> b)) & 1
    best = int(np.argmin(counts))
    mask = int(masks[best])
    side_b = frozenset(nodes[i] for i in range(n) if mask >> i & 1)
    side_a = frozenset(nodes) - side_b
    return CutResult(int(counts[best]), side_a, side_b)
