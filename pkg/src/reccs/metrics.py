"""Fit metrics between a real and a synthetic clustered network."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .graph import Clustering, Graph, GraphError, induced_subgraph
from .mincut import connected_components, min_edge_cut

METRIC_NAMES = (
    "min_cut_rmse",
    "diameter_reldiff",
    "mixing_param_diff",
    "degree_rmse",
    "global_cc_diff",
    "mean_local_cc_diff",
    "outlier_edges_reldiff",
    "outlier_degree_rmse",
    "edit_distance_norm",
)


def simple_difference(s: float, s_prime: float) -> float:
    return s - s_prime


def relative_difference(s: float, s_prime: float) -> float:
    if s == 0:
        raise ZeroDivisionError("relative difference undefined for s = 0")
    return (s - s_prime) / s


def rmse(s, s_prime) -> float:
    a = np.asarray(s, dtype=float)
    b = np.asarray(s_prime, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"sequence lengths differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("RMSE of empty sequences")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def _pair(s, s_prime, paired: str):
    if paired == "sorted":
        return sorted(s), sorted(s_prime)
    if paired != "by-id":
        raise ValueError(f"paired must be 'by-id' or 'sorted', got {paired!r}")
    return s, s_prime


def degree_sequence_rmse(real: Graph, synth: Graph, scope: str = "all",
                         clustering: Clustering | None = None, paired: str = "by-id") -> float:
    """RMSE of node degrees paired by node id over the chosen node scope."""
    if set(real.adj) != set(synth.adj):
        raise GraphError("real and synthetic graphs have different node sets")
    if scope == "all":
        nodes = sorted(real.adj)
    elif scope in ("clustered", "outlier"):
        if clustering is None:
            raise ValueError(f"scope {scope!r} needs a clustering")
        nodes = clustering.clustered_nodes() if scope == "clustered" else clustering.outliers()
    else:
        raise ValueError(f"unknown scope {scope!r}")
    a, b = _pair([real.degree(v) for v in nodes], [synth.degree(v) for v in nodes], paired)
    return rmse(a, b)


def cluster_min_cuts(graph: Graph, clustering: Clustering) -> list[int]:
    return [min_edge_cut(induced_subgraph(graph, members)).cut_size
            for members in clustering.clusters.values()]


def min_cut_sequence_rmse(real: Graph, synth: Graph, clustering: Clustering,
                          paired: str = "by-id") -> float:
    a, b = _pair(cluster_min_cuts(real, clustering), cluster_min_cuts(synth, clustering), paired)
    return rmse(a, b)


def min_cut_deficit_rmse(real: Graph, synth: Graph, clustering: Clustering) -> float:
    """RMSE counting only clusters whose synthetic cut falls short of the real one."""
    a = np.array(cluster_min_cuts(real, clustering), dtype=float)
    b = np.array(cluster_min_cuts(synth, clustering), dtype=float)
    return rmse(np.maximum(a - b, 0), np.zeros_like(a))


def _adjacency(graph: Graph) -> tuple[sp.csr_matrix, list[int]]:
    nodes = sorted(graph.adj)
    index = {v: i for i, v in enumerate(nodes)}
    rows = []
    cols = []
    for u in nodes:
        iu = index[u]
        for w in graph.adj[u]:
            rows.append(iu)
            cols.append(index[w])
    n = len(nodes)
    data = np.ones(len(rows), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n)), nodes


def triangles_per_node(graph: Graph) -> np.ndarray:
    a, _ = _adjacency(graph)
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def clustering_coefficients(graph: Graph) -> tuple[float, float]:
    """Global (transitivity) and mean local clustering coefficient.

    Nodes of degree < 2 count as local coefficient 0.
    """
    if graph.n == 0:
        return 0.0, 0.0
    tri = triangles_per_node(graph).astype(float)
    deg = np.array([graph.degree(v) for v in sorted(graph.adj)], dtype=float)
    wedges = deg * (deg - 1) / 2
    total_wedges = wedges.sum()
    global_cc = float(tri.sum() / total_wedges) if total_wedges else 0.0
    local = np.divide(tri, wedges, out=np.zeros_like(tri), where=wedges > 0)
    return global_cc, float(local.mean())


def mixing_parameter(graph: Graph, clustering: Clustering) -> float:
    """Fraction of edges between different clusters; outliers are singletons."""
    if graph.m == 0:
        return 0.0
    cluster_of = clustering.assignment
    inter = 0
    for u, nb in graph.adj.items():
        cu = cluster_of.get(u)
        for v in nb:
            if u < v and (cu is None or cluster_of.get(v) != cu):
                inter += 1
    return inter / graph.m


def _bfs_ecc(a: sp.csr_matrix, source: int) -> tuple[int, np.ndarray]:
    dist = shortest_path(a, unweighted=True, indices=source)
    return int(dist.max()), dist


def diameter(graph: Graph) -> int:
    """Exact diameter of the largest connected component.

    Uses eccentricity bounds so that most nodes never need their own BFS.
    """
    if graph.n == 0:
        raise GraphError("diameter of an empty graph")
    comp = connected_components(graph)[0]
    if len(comp) == 1:
        return 0
    a, _ = _adjacency(induced_subgraph(graph, comp))
    n = a.shape[0]
    lower = np.zeros(n, dtype=np.int64)
    upper = np.full(n, np.iinfo(np.int64).max)
    candidates = np.ones(n, dtype=bool)
    d_low, d_high = 0, np.iinfo(np.int64).max
    pick_high = False
    deg = np.diff(a.indptr)
    v = int(np.argmax(deg))
    while candidates.any() and d_low < d_high:
        ecc, dist = _bfs_ecc(a, v)
        dist = dist.astype(np.int64)
        candidates[v] = False
        lower = np.maximum(lower, np.maximum(ecc - dist, dist))
        upper = np.minimum(upper, ecc + dist)
        lower[v] = upper[v] = ecc
        d_low = max(d_low, int(lower.max()))
        d_high = min(d_high, int(upper[candidates].max()) if candidates.any() else d_low)
        d_high = max(d_high, d_low)
        candidates &= ~((upper <= d_low) & (lower >= (d_high + 1) // 2))
        candidates &= lower != upper
        if not candidates.any():
            break
        idx = np.flatnonzero(candidates)
        if pick_high:
            v = int(idx[np.argmax(upper[idx])])
        else:
            v = int(idx[np.argmin(lower[idx])])
        pick_high = not pick_high
    return int(d_low)


def outlier_cluster_edge_count(graph: Graph, clustering: Clustering) -> int:
    """Edges with exactly one outlier endpoint."""
    clustered = clustering.assignment
    count = 0
    for u, nb in graph.adj.items():
        if u in clustered:
            continue
        count += sum(1 for w in nb if w in clustered)
    return count


def normalized_edit_distance(g: Graph, n: Graph) -> float:
    if set(g.adj) != set(n.adj):
        raise GraphError("graphs have different node sets")
    if g.m == 0:
        raise ZeroDivisionError("edit distance undefined when the real graph has no edges")
    eg = g.edge_set()
    en = n.edge_set()
    return len(eg ^ en) / len(eg)


def _labels(c, n: int) -> np.ndarray:
    if isinstance(c, Clustering):
        if c.n != n:
            raise ValueError(f"clustering covers {c.n} nodes, expected {n}")
        return np.asarray(c.labels_with_singletons())
    arr = np.asarray(c)
    if arr.shape != (n,):
        raise ValueError(f"label vector has shape {arr.shape}, expected ({n},)")
    return arr


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = sp.coo_matrix((np.ones(len(a)), (ia, ib)),
                          shape=(ia.max() + 1, ib.max() + 1)).tocsr()
    table.sum_duplicates()
    return table


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(a, b, n: int) -> float:
    """Mutual information over the arithmetic mean of the two entropies.

    ``a`` and ``b`` are Clusterings (outliers become singletons) or label vectors.
    """
    la, lb = _labels(a, n), _labels(b, n)
    if n == 0:
        raise ValueError("NMI of an empty node set")
    table = _contingency(la, lb)
    ha = _entropy(np.asarray(table.sum(axis=1)).ravel(), n)
    hb = _entropy(np.asarray(table.sum(axis=0)).ravel(), n)
    if ha == 0 and hb == 0:
        return 1.0
    nz = table.tocoo()
    nij = nz.data
    ai = np.asarray(table.sum(axis=1)).ravel()[nz.row]
    bj = np.asarray(table.sum(axis=0)).ravel()[nz.col]
    mi = float((nij / n * (np.log(nij * n) - np.log(ai * bj))).sum())
    return max(0.0, min(1.0, mi / ((ha + hb) / 2)))


def ari(a, b, n: int) -> float:
    """Adjusted Rand index from pair counts."""
    la, lb = _labels(a, n), _labels(b, n)
    table = _contingency(la, lb)
    comb = lambda x: x * (x - 1) / 2  # noqa: E731
    sum_ij = float(comb(table.data).sum())
    sum_a = float(comb(np.asarray(table.sum(axis=1)).ravel()).sum())
    sum_b = float(comb(np.asarray(table.sum(axis=0)).ravel()).sum())
    total = comb(float(n))
    expected = sum_a * sum_b / total if total else 0.0
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return (sum_ij - expected) / (max_index - expected)


@dataclass
class MetricReport:
    metrics: dict[str, float | None]
    auxiliary: dict[str, float | None] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"metrics": self.metrics, "auxiliary": self.auxiliary, "metadata": self.metadata}

    def write_json(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def csv_row(self) -> dict:
        row = {k: v for k, v in self.metadata.items() if not isinstance(v, (dict, list))}
        row.update(self.metrics)
        row.update(self.auxiliary)
        return row


def write_csv(reports: list[MetricReport], path: str | Path) -> None:
    rows = [r.csv_row() for r in reports]
    fields: list[str] = []
    for row in rows:
        fields += [k for k in row if k not in fields]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row.get(k)) for k in fields})


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else x


def _guarded(fn, *args):
    # undefined statistics (e.g. zero real outlier edges) become null
    try:
        return fn(*args)
    except (ZeroDivisionError, ValueError):
        return None


def full_report(real: Graph, synth: Graph, clustering: Clustering,
                paired: str = "by-id", metadata: dict | None = None) -> MetricReport:
    """Every fit statistic with its distance, plus edit distance."""
    if set(real.adj) != set(synth.adj):
        raise GraphError("real and synthetic graphs have different node sets")
    real_cuts = cluster_min_cuts(real, clustering)
    synth_cuts = cluster_min_cuts(synth, clustering)
    g_real, l_real = clustering_coefficients(real)
    g_syn, l_syn = clustering_coefficients(synth)
    metrics = {
        "min_cut_rmse": _guarded(rmse, *_pair(real_cuts, synth_cuts, paired)),
        "diameter_reldiff": _guarded(relative_difference, diameter(real), diameter(synth)),
        "mixing_param_diff": simple_difference(mixing_parameter(real, clustering),
                                               mixing_parameter(synth, clustering)),
        "degree_rmse": _guarded(degree_sequence_rmse, real, synth, "all", clustering, paired),
        "global_cc_diff": simple_difference(g_real, g_syn),
        "mean_local_cc_diff": simple_difference(l_real, l_syn),
        "outlier_edges_reldiff": _guarded(relative_difference,
                                          outlier_cluster_edge_count(real, clustering),
                                          outlier_cluster_edge_count(synth, clustering)),
        "outlier_degree_rmse": _guarded(degree_sequence_rmse, real, synth, "outlier",
                                        clustering, paired),
        "edit_distance_norm": _guarded(normalized_edit_distance, real, synth),
    }
    deficits = [max(a - b, 0) for a, b in zip(real_cuts, synth_cuts)]
    auxiliary = {
        "min_cut_deficit_rmse": _guarded(rmse, deficits, [0] * len(deficits)),
        "clusters_below_real_cut": sum(1 for d in deficits if d),
        "disconnected_clusters": sum(1 for c in synth_cuts if c == 0),
        "clusters": len(real_cuts),
    }
    meta = {"real_edges": real.m, "synth_edges": synth.m, "nodes": real.n,
            "paired": paired}
    meta.update(metadata or {})
    return MetricReport(metrics, auxiliary, meta)


def summarize(reports: list[MetricReport]) -> dict[str, dict[str, float | None]]:
    """Mean and population std of each metric across replicate reports."""
    out = {}
    keys = list(METRIC_NAMES) + [k for k in reports[0].auxiliary] if reports else []
    for key in keys:
        vals = [r.metrics.get(key, r.auxiliary.get(key)) for r in reports]
        vals = [v for v in vals if v is not None]
        if not vals:
            out[key] = {"mean": None, "std": None}
        else:
            out[key] = {"mean": float(np.mean(vals)), "std": float(np.std(vals))}
    return out
