"""Read-off of block-model parameters from a clustered network."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .graph import Clustering, Graph, GraphError, induced_subgraph
from .mincut import min_edge_cut

FORMAT_VERSION = 1


def pair_key(r: str, s: str) -> tuple[str, str]:
    return (r, s) if r <= s else (s, r)


@dataclass
class BlockParams:
    """Degree targets, block map, sparse block-pair edge counts and k(C).

    ``edge_count_matrix`` holds each unordered block pair once, keyed by
    ``pair_key``; the diagonal entry of a block is its intra-cluster count.
    """

    n: int
    degree_target: dict[int, int]
    block_of: dict[int, str]
    edge_count_matrix: dict[tuple[str, str], int]
    connectivity_req: dict[str, int]
    labels: list[str] | None = None

    def blocks(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {cid: [] for cid in self.connectivity_req}
        for v in sorted(self.block_of):
            out.setdefault(self.block_of[v], []).append(v)
        return out

    def clustering(self) -> Clustering:
        return Clustering(self.n, self.blocks())

    def total_edges(self) -> int:
        return sum(self.edge_count_matrix.values())


@dataclass
class OutlierParams:
    """Parameters of the outlier subnetwork (edges touching an outlier).

    ``attach_weight`` is the degree target of each clustered node; it
    weights where outlier-to-cluster edges land.
    """

    outlier_ids: list[int]
    outlier_outlier_edges: list[tuple[int, int]]
    outlier_block_counts: dict[tuple[int, str], int]
    outlier_degree_target: dict[int, int]
    attach_weight: dict[int, int] = field(default_factory=dict)

    def total_edges(self) -> int:
        return len(self.outlier_outlier_edges) + sum(self.outlier_block_counts.values())


def block_pair_counts(graph: Graph, block_of: dict[int, str]) -> Counter:
    """Edge counts per unordered block pair, over edges with both ends in blocks."""
    counts: Counter = Counter()
    for u, nb in graph.adj.items():
        bu = block_of.get(u)
        if bu is None:
            continue
        for v in nb:
            if u < v:
                bv = block_of.get(v)
                if bv is not None:
                    counts[pair_key(bu, bv)] += 1
    return counts


def cluster_connectivity(graph: Graph, members: list[int]) -> int:
    """Edge connectivity of the subgraph induced by ``members``."""
    return min_edge_cut(induced_subgraph(graph, members)).cut_size


def extract_block_params(graph: Graph, clustering: Clustering) -> BlockParams:
    if not clustering.clusters:
        raise GraphError("nothing to model: the clustering has no cluster of size >= 2")
    clustered = clustering.clustered_nodes()
    g_c = induced_subgraph(graph, clustered)
    block_of = {v: clustering.assignment[v] for v in clustered}
    degree_target = {v: len(g_c.adj[v]) for v in clustered}
    matrix = dict(sorted(block_pair_counts(g_c, block_of).items()))
    k = {cid: cluster_connectivity(g_c, members)
         for cid, members in clustering.clusters.items()}
    return BlockParams(graph.n, degree_target, block_of, matrix, k, graph.labels)


def extract_outlier_params(graph: Graph, clustering: Clustering) -> OutlierParams:
    outliers = clustering.outliers()
    assignment = clustering.assignment
    oo_edges = []
    block_counts: Counter = Counter()
    degree = {}
    for o in outliers:
        nb = graph.adj[o]
        degree[o] = len(nb)
        for w in sorted(nb):
            cid = assignment.get(w)
            if cid is None:
                if o < w:
                    oo_edges.append((o, w))
            else:
                block_counts[(o, cid)] += 1
    attach_weight = {}
    if block_counts:
        clustered = set(assignment)
        attach_weight = {v: sum(1 for w in graph.adj[v] if w in clustered)
                         for v in sorted(clustered)}
    return OutlierParams(outliers, oo_edges, dict(sorted(block_counts.items())),
                         degree, attach_weight)


def params_to_json(block: BlockParams, outlier: OutlierParams) -> dict:
    return {
        "format": "reccs-params",
        "version": FORMAT_VERSION,
        "n": block.n,
        "labels": block.labels,
        "block": {
            "degree_target": [[v, d] for v, d in sorted(block.degree_target.items())],
            "block_of": [[v, c] for v, c in sorted(block.block_of.items())],
            "edge_count_matrix": [[r, s, m] for (r, s), m in block.edge_count_matrix.items()],
            "connectivity_req": block.connectivity_req,
        },
        "outlier": {
            "outlier_ids": outlier.outlier_ids,
            "outlier_outlier_edges": [list(e) for e in outlier.outlier_outlier_edges],
            "outlier_block_counts": [[o, c, m] for (o, c), m in outlier.outlier_block_counts.items()],
            "outlier_degree_target": [[v, d] for v, d in sorted(outlier.outlier_degree_target.items())],
            "attach_weight": [[v, d] for v, d in sorted(outlier.attach_weight.items())],
        },
    }


def params_from_json(data: dict) -> tuple[BlockParams, OutlierParams]:
    if data.get("format") != "reccs-params":
        raise GraphError("not a reccs parameter file")
    b = data["block"]
    o = data["outlier"]
    block = BlockParams(
        n=data["n"],
        degree_target={v: d for v, d in b["degree_target"]},
        block_of={v: str(c) for v, c in b["block_of"]},
        edge_count_matrix={pair_key(str(r), str(s)): m for r, s, m in b["edge_count_matrix"]},
        connectivity_req={str(c): k for c, k in b["connectivity_req"].items()},
        labels=data.get("labels"),
    )
    outlier = OutlierParams(
        outlier_ids=list(o["outlier_ids"]),
        outlier_outlier_edges=[tuple(e) for e in o["outlier_outlier_edges"]],
        outlier_block_counts={(v, str(c)): m for v, c, m in o["outlier_block_counts"]},
        outlier_degree_target={v: d for v, d in o["outlier_degree_target"]},
        attach_weight={v: d for v, d in o["attach_weight"]},
    )
    return block, outlier


def save_params(block: BlockParams, outlier: OutlierParams, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(params_to_json(block, outlier), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_params(path: str | Path) -> tuple[BlockParams, OutlierParams]:
    with open(path) as fh:
        return params_from_json(json.load(fh))
