"""Micro-canonical degree-corrected SBM draws and simplification."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .graph import Clustering, Graph, GraphError
from .params import BlockParams, OutlierParams
from .rng import RngStream


@dataclass
class MultigraphDraw:
    """Edge multiset from one SBM draw, kept as two endpoint arrays.

    ``segments`` lists ``(block_pair, start, stop)`` slices of the arrays so
    the per-pair edge counts can be audited before simplification.
    """

    nodes: list[int]
    u: np.ndarray
    v: np.ndarray
    segments: list[tuple[tuple, int, int]] = field(default_factory=list)
    seed: int | None = None
    stream_id: str | None = None

    def __len__(self) -> int:
        return len(self.u)

    def pair_counts(self) -> dict[tuple, int]:
        counts: Counter = Counter()
        for key, start, stop in self.segments:
            counts[key] += stop - start
        return dict(counts)

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.u.tolist(), self.v.tolist()))


@dataclass
class SimplifyReport:
    self_loops: int = 0
    parallel: int = 0
    removed_by_pair: dict[tuple, int] = field(default_factory=dict)

    @property
    def removed(self) -> int:
        return self.self_loops + self.parallel


def draw_block_edges(blocks: Mapping[str, list[int]], weight: Mapping[int, int],
                     counts: Iterable[tuple[tuple[str, str], int]], rng: RngStream,
                     nodes: list[int]) -> MultigraphDraw:
    """Place exactly ``m`` edges for every block pair ``((r, s), m)``.

    Each endpoint is an independent stub draw from its block, i.e. a node is
    chosen with probability proportional to its weight within the block.
    """
    order = list(blocks)
    bidx = {b: i for i, b in enumerate(order)}
    flat = [v for b in order for v in blocks[b]]
    w = np.fromiter((weight.get(v, 0) for v in flat), dtype=np.int64, count=len(flat))
    if (w < 0).any():
        raise GraphError("negative degree weight")
    cum = np.cumsum(w)
    sizes = np.array([len(blocks[b]) for b in order], dtype=np.int64)
    node_start = np.concatenate(([0], np.cumsum(sizes)))[:-1]
    stub_start = np.where(node_start > 0, cum[node_start - 1], 0) if len(flat) else node_start
    totals = np.array([int(w[s:s + k].sum()) for s, k in zip(node_start, sizes)], dtype=np.int64)

    segments = []
    ends_r, ends_s = [], []
    pos = 0
    for key, m in counts:
        if m <= 0:
            continue
        r, s = key
        if r not in bidx or s not in bidx:
            raise GraphError(f"unknown block in pair {key}")
        if totals[bidx[r]] == 0 or totals[bidx[s]] == 0:
            raise GraphError(f"infeasible block parameters: block pair {key} "
                             f"needs {m} edges but a block has total degree 0")
        ends_r.append(np.full(m, bidx[r]))
        ends_s.append(np.full(m, bidx[s]))
        segments.append((key, pos, pos + m))
        pos += m

    flat_arr = np.asarray(flat, dtype=np.int64)
    if pos == 0:
        empty = np.zeros(0, dtype=np.int64)
        return MultigraphDraw(nodes, empty, empty.copy(), segments, rng.seed, rng.stream_id)

    def endpoints(block_ids: np.ndarray) -> np.ndarray:
        stubs = stub_start[block_ids] + rng.np.integers(0, totals[block_ids])
        return flat_arr[np.searchsorted(cum, stubs, side="right")]

    u = endpoints(np.concatenate(ends_r))
    v = endpoints(np.concatenate(ends_s))
    return MultigraphDraw(nodes, u, v, segments, rng.seed, rng.stream_id)


def sample_dcsbm(params: BlockParams, rng: RngStream) -> MultigraphDraw:
    """Degree-corrected SBM draw honouring the edge-count matrix exactly."""
    return draw_block_edges(params.blocks(), params.degree_target,
                            sorted(params.edge_count_matrix.items()), rng,
                            list(range(params.n)))


def simplify(draw: MultigraphDraw) -> tuple[Graph, SimplifyReport]:
    """Drop self-loops and collapse parallel edges; count removals per block pair."""
    report = SimplifyReport()
    graph = Graph(draw.nodes)
    if len(draw) == 0:
        return graph, report
    a = np.minimum(draw.u, draw.v)
    b = np.maximum(draw.u, draw.v)
    loops = a == b
    report.self_loops = int(loops.sum())
    span = int(b.max()) + 1
    keys = a * span + b
    keys[loops] = -1
    _, first = np.unique(keys, return_index=True)
    keep = np.zeros(len(keys), dtype=bool)
    keep[first] = True
    keep &= ~loops
    report.parallel = len(draw) - report.self_loops - int(keep.sum())
    for key, start, stop in draw.segments:
        dropped = (stop - start) - int(keep[start:stop].sum())
        if dropped:
            report.removed_by_pair[key] = report.removed_by_pair.get(key, 0) + dropped
    adj = graph.adj
    for x, y in zip(a[keep].tolist(), b[keep].tolist()):
        adj[x].add(y)
        adj[y].add(x)
    graph._m = int(keep.sum())
    return graph, report


def draw_outlier_edges(params: OutlierParams, clustering: Clustering,
                       rng: RngStream) -> MultigraphDraw:
    """Outlier-outlier edges verbatim plus weighted outlier-to-cluster draws."""
    for _, cid in params.outlier_block_counts:
        if cid not in clustering.clusters:
            raise GraphError(f"unknown cluster id {cid!r}")
    needed = sorted({cid for _, cid in params.outlier_block_counts})
    blocks = {cid: clustering.clusters[cid] for cid in needed}
    weight = {}
    for cid, members in blocks.items():
        ws = {v: params.attach_weight.get(v, 0) for v in members}
        if sum(ws.values()) == 0:
            ws = dict.fromkeys(members, 1)
        weight.update(ws)
    for o in params.outlier_ids:
        blocks[f"outlier:{o}"] = [o]
        weight[o] = 1
    counts = [((f"outlier:{o}", cid), m) for (o, cid), m in params.outlier_block_counts.items()]
    cross = draw_block_edges(blocks, weight, counts, rng, list(range(clustering.n)))

    oo = np.asarray(params.outlier_outlier_edges, dtype=np.int64).reshape(-1, 2)
    start = len(cross)
    segments = list(cross.segments)
    if len(oo):
        segments.append((("outlier", "outlier"), start, start + len(oo)))
    return MultigraphDraw(cross.nodes, np.concatenate((cross.u, oo[:, 0])),
                          np.concatenate((cross.v, oo[:, 1])), segments,
                          rng.seed, rng.stream_id)


def sample_outlier_network(params: OutlierParams, clustering: Clustering,
                           rng: RngStream) -> tuple[Graph, SimplifyReport]:
    return simplify(draw_outlier_edges(params, clustering, rng))
