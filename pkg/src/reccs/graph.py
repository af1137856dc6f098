"""Simple undirected graphs, clusterings, and their TSV formats."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    pass


@dataclass
class LoadReport:
    lines: int = 0
    edges: int = 0
    duplicates: int = 0
    self_loops: int = 0


class Graph:
    """Simple undirected graph over integer node ids.

    Adjacency is a dict of neighbor sets, so an induced subgraph keeps the
    ids of its parent graph. ``labels`` (optional) maps id -> external label.
    """

    __slots__ = ("adj", "_m", "labels", "load_report")

    def __init__(self, nodes: Iterable[int] = (), edges: Iterable[tuple[int, int]] = (),
                 labels: list[str] | None = None):
        self.adj: dict[int, set[int]] = {int(v): set() for v in nodes}
        self._m = 0
        self.labels = labels
        self.load_report: LoadReport | None = None
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def empty(cls, n: int, labels: list[str] | None = None) -> Graph:
        return cls(range(n), labels=labels)

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return self._m

    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adj.get(u)
        return nb is not None and v in nb

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge (u, v). Returns False if it was already present.

        Self-loops and unknown endpoints raise GraphError.
        """
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        try:
            nu = self.adj[u]
            nv = self.adj[v]
        except KeyError as exc:
            raise GraphError(f"node {exc.args[0]} not in graph") from None
        if v in nu:
            return False
        nu.add(v)
        nv.add(u)
        self._m += 1
        return True

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each edge once as (u, v) with u < v, in ascending order."""
        for u in sorted(self.adj):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u, nb in self.adj.items() for v in nb if u < v}

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        g._m = self._m
        g.labels = self.labels
        g.load_report = None
        return g

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def validate(self) -> None:
        """Raise GraphError unless the graph is simple and symmetric."""
        count = 0
        for u, nb in self.adj.items():
            if u in nb:
                raise GraphError(f"self-loop at node {u}")
            for v in nb:
                if v not in self.adj:
                    raise GraphError(f"edge ({u}, {v}) leaves the node set")
                if u not in self.adj[v]:
                    raise GraphError(f"asymmetric adjacency ({u}, {v})")
            count += len(nb)
        if count != 2 * self._m:
            raise GraphError(f"edge count {self._m} disagrees with adjacency ({count / 2})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def induced_subgraph(graph: Graph, nodes: Iterable[int]) -> Graph:
    """Subgraph on ``nodes`` with every edge of ``graph`` inside it. Ids are kept."""
    keep = set(nodes)
    for v in keep:
        if v not in graph.adj:
            raise GraphError(f"node {v} not in graph")
    sub = Graph.__new__(Graph)
    sub.adj = {v: graph.adj[v] & keep for v in keep}
    sub._m = sum(len(nb) for nb in sub.adj.values()) // 2
    sub.labels = graph.labels
    sub.load_report = None
    return sub


def _label_order(labels: Iterable[str]) -> list[str]:
    """Numeric order when every label is an integer, lexicographic otherwise."""
    labels = list(labels)
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)


def _label_key(labels: list[str]):
    try:
        for s in labels:
            int(s)
    except ValueError:
        return lambda s: s
    return int


def load_edge_list(path: str | Path) -> Graph:
    """Read a whitespace separated edge list.

    Labels are remapped to dense ids 0..n-1 (numeric label order if every
    label is an integer). Duplicate edges and self-loops are dropped and
    counted in ``graph.load_report``.
    """
    pairs = []
    seen_labels: set[str] = set()
    report = LoadReport()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 tokens, got {len(tokens)}")
            report.lines += 1
            pairs.append((tokens[0], tokens[1]))
            seen_labels.update(tokens)

    labels = _label_order(seen_labels)
    index = {lab: i for i, lab in enumerate(labels)}
    graph = Graph.empty(len(labels), labels=labels)
    for a, b in pairs:
        u, v = index[a], index[b]
        if u == v:
            report.self_loops += 1
        elif not graph.add_edge(u, v):
            report.duplicates += 1
    report.edges = graph.m
    graph.load_report = report
    if report.duplicates or report.self_loops:
        log.info("%s: dropped %d duplicate edges and %d self-loops",
                 path, report.duplicates, report.self_loops)
    return graph


def write_edge_list(graph: Graph, path: str | Path) -> None:
    """Write each edge once as ``u<TAB>v`` in canonical label order."""
    if graph.labels is None:
        rows = list(graph.edges())
        lines = [f"{u}\t{v}\n" for u, v in rows]
    else:
        labels = graph.labels
        key = _label_key([labels[v] for v in graph.adj])
        rows = []
        for u, v in graph.edges():
            a, b = labels[u], labels[v]
            if key(b) < key(a):
                a, b = b, a
            rows.append((key(a), key(b), a, b))
        rows.sort()
        lines = [f"{a}\t{b}\n" for _, _, a, b in rows]
    with open(path, "w") as fh:
        fh.writelines(lines)


@dataclass
class Clustering:
    """Partition of some nodes into clusters of size >= 2.

    Nodes in ``range(n)`` without an assignment are outliers.
    """

    n: int
    clusters: dict[str, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        self.assignment: dict[int, str] = {}
        for cid, members in self.clusters.items():
            if len(members) < 2:
                raise GraphError(f"cluster {cid} has fewer than 2 nodes")
            for v in members:
                if not 0 <= v < self.n:
                    raise GraphError(f"node {v} out of range")
                if v in self.assignment:
                    raise GraphError(f"node {v} assigned to clusters "
                                     f"{self.assignment[v]} and {cid}")
                self.assignment[v] = cid
        self.clusters = {cid: sorted(self.clusters[cid])
                         for cid in _label_order(self.clusters)}

    @classmethod
    def from_assignment(cls, n: int, assignment: dict[int, str]) -> Clustering:
        """Build from node -> cluster; singleton clusters become outliers."""
        groups: dict[str, list[int]] = {}
        for v, cid in assignment.items():
            groups.setdefault(str(cid), []).append(v)
        return cls(n, {cid: m for cid, m in groups.items() if len(m) >= 2})

    @property
    def cluster_ids(self) -> list[str]:
        return list(self.clusters)

    def members(self, cid: str) -> list[int]:
        return self.clusters[cid]

    def cluster_of(self, v: int) -> str | None:
        return self.assignment.get(v)

    def clustered_nodes(self) -> list[int]:
        return sorted(self.assignment)

    def outliers(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.assignment]

    def labels_with_singletons(self) -> list[int]:
        """Dense integer label per node; each outlier gets its own label."""
        index = {cid: i for i, cid in enumerate(self.clusters)}
        nxt = len(index)
        out = []
        for v in range(self.n):
            cid = self.assignment.get(v)
            if cid is None:
                out.append(nxt)
                nxt += 1
            else:
                out.append(index[cid])
        return out


def load_clustering(path: str | Path, graph: Graph) -> Clustering:
    """Read ``node<TAB>cluster`` lines against the graph's label table."""
    if graph.labels is not None:
        index = {lab: i for i, lab in enumerate(graph.labels)}
    else:
        index = {str(v): v for v in graph.adj}
    assignment: dict[int, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 tokens, got {len(tokens)}")
            node, cid = tokens
            if node not in index:
                raise GraphError(f"{path}:{lineno}: unknown node label {node!r}")
            v = index[node]
            if v in assignment and assignment[v] != cid:
                raise GraphError(f"{path}:{lineno}: node {node!r} assigned to "
                                 f"clusters {assignment[v]!r} and {cid!r}")
            assignment[v] = cid
    return Clustering.from_assignment(graph.n, assignment)


def write_clustering(clustering: Clustering, path: str | Path,
                     labels: list[str] | None = None) -> None:
    with open(path, "w") as fh:
        for cid, members in clustering.clusters.items():
            for v in members:
                fh.write(f"{labels[v] if labels else v}\t{cid}\n")
