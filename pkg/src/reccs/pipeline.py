"""RECCS repair pipeline.

Step 1 draws a degree-corrected SBM for the clustered subnetwork and then
adds edges in four stages (minimum intra-cluster degree, cluster
connectivity, edge connectivity >= k(C), degree fit). Step 2 models the
outlier edges and Step 3 merges the two networks. No stage removes an edge.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import asdict, dataclass, field

from .graph import Clustering, Graph, GraphError, induced_subgraph
from .mincut import connected_components, min_edge_cut
from .params import (BlockParams, OutlierParams, block_pair_counts,
                     extract_block_params, extract_outlier_params, pair_key)
from .rng import RngStream, derive_seed
from .sbm import draw_block_edges, sample_dcsbm, sample_outlier_network, simplify

log = logging.getLogger(__name__)

VARIANTS = ("v1", "v2", "sbm-only")


class RepairError(RuntimeError):
    pass


class AvailableDegreeLedger:
    """Remaining degree budget ``max(0, target - current)`` of clustered nodes."""

    def __init__(self, target: dict[int, int], graph: Graph):
        self.target = target
        self.current = {v: len(graph.adj[v]) for v in target}

    def available(self, v: int) -> int:
        t = self.target.get(v)
        if t is None:
            return 0
        return max(0, t - self.current[v])

    def record_edge(self, u: int, v: int) -> None:
        if u in self.current:
            self.current[u] += 1
        if v in self.current:
            self.current[v] += 1

    def available_nodes(self) -> dict[int, int]:
        """Nodes with positive availability, in id order."""
        return {v: t - self.current[v] for v, t in sorted(self.target.items())
                if t > self.current[v]}

    def check(self, graph: Graph) -> None:
        for v in self.target:
            if self.current[v] != len(graph.adj[v]):
                raise RepairError(f"ledger out of sync at node {v}")


@dataclass
class StageReport:
    stage: str
    edges_added: int = 0
    per_cluster: dict[str, int] = field(default_factory=dict)
    clusters_repaired: int = 0
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _connect(net: Graph, ledger: AvailableDegreeLedger, u: int, v: int) -> bool:
    if net.add_edge(u, v):
        ledger.record_edge(u, v)
        return True
    return False


def _pick(candidates: list[int], ledger: AvailableDegreeLedger, rng: RngStream) -> int:
    # prefer nodes with available degree, otherwise any eligible node
    pool = [c for c in candidates if ledger.available(c) > 0] or candidates
    return pool[rng.py.randrange(len(pool))]


def _add_cross_edges(net: Graph, side_x, side_y, count: int,
                     ledger: AvailableDegreeLedger, rng: RngStream) -> int:
    """Add up to ``count`` new edges between two disjoint node sets."""
    xs = sorted(side_x)
    ys = sorted(side_y)
    yset = set(ys)
    adj = net.adj
    added = 0
    for _ in range(count):
        open_x = [u for u in xs if sum(1 for w in adj[u] if w in yset) < len(ys)]
        if not open_x:
            break
        u = _pick(open_x, ledger, rng)
        w = _pick([y for y in ys if y not in adj[u]], ledger, rng)
        _connect(net, ledger, u, w)
        added += 1
    return added


def _finish(report: StageReport, before: int, net: Graph) -> StageReport:
    report.edges_added = net.m - before
    report.clusters_repaired = sum(1 for c in report.per_cluster.values() if c)
    report.per_cluster = {c: k for c, k in report.per_cluster.items() if k}
    return report


def stage1_enforce_min_degree(net: Graph, params: BlockParams,
                              ledger: AvailableDegreeLedger, rng: RngStream) -> StageReport:
    """Give every node at least k(C) neighbours inside its cluster."""
    report = StageReport("stage1")
    before = net.m
    adj = net.adj
    for cid, members in params.blocks().items():
        k = params.connectivity_req.get(cid, 0)
        if k <= 0:
            continue
        crng = rng.child(cid)
        mset = set(members)
        added = 0
        for v in members:
            need = k - sum(1 for w in adj[v] if w in mset)
            while need > 0:
                eligible = [w for w in members if w != v and w not in adj[v]]
                if not eligible:
                    report.warnings.append(
                        f"cluster {cid}: node {v} saturated below k={k}")
                    break
                _connect(net, ledger, v, _pick(eligible, ledger, crng))
                added += 1
                need -= 1
        report.per_cluster[cid] = added
    return _finish(report, before, net)


def stage2_connect_clusters(net: Graph, params: BlockParams,
                            ledger: AvailableDegreeLedger, rng: RngStream) -> StageReport:
    """Join every component of a disconnected cluster to its largest component."""
    report = StageReport("stage2")
    before = net.m
    for cid, members in params.blocks().items():
        if len(members) < 2:
            continue
        comps = connected_components(induced_subgraph(net, members))
        if len(comps) == 1:
            continue
        crng = rng.child(cid)
        want = max(params.connectivity_req.get(cid, 0), 1)
        largest = comps[0]
        added = 0
        for comp in comps[1:]:
            added += _add_cross_edges(net, comp, largest, want, ledger, crng)
        report.per_cluster[cid] = added
    return _finish(report, before, net)


def stage3_raise_connectivity(net: Graph, params: BlockParams,
                              ledger: AvailableDegreeLedger, rng: RngStream) -> StageReport:
    """Add edges across minimum cuts until every cluster has cut size >= k(C)."""
    report = StageReport("stage3")
    before = net.m
    for cid, members in params.blocks().items():
        k = params.connectivity_req.get(cid, 0)
        if k <= 0 or len(members) < 2:
            continue
        crng = rng.child(cid)
        added = 0
        rounds = 0
        limit = 10 * len(members)
        while True:
            cut = min_edge_cut(induced_subgraph(net, members))
            if cut.cut_size >= k:
                break
            rounds += 1
            if rounds > limit:
                raise RepairError(f"cluster {cid}: min cut still {cut.cut_size} < {k} "
                                  f"after {limit} rounds")
            new = _add_cross_edges(net, cut.side_b, cut.side_a, k - cut.cut_size,
                                   ledger, crng)
            if new == 0:
                report.warnings.append(f"cluster {cid}: complete across cut, "
                                       f"cut {cut.cut_size} < k={k}")
                break
            added += new
        report.per_cluster[cid] = added
    return _finish(report, before, net)


class _IndexedSet:
    """Set with O(1) removal and uniform random element access."""

    def __init__(self, items):
        self.items = list(items)
        self.pos = {v: i for i, v in enumerate(self.items)}

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return v in self.pos

    def remove(self, v):
        i = self.pos.pop(v)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i


def stage4_v1_degree_fit(net: Graph, ledger: AvailableDegreeLedger,
                         rng: RngStream) -> StageReport:
    """Pair nodes with available degree, largest availability first.

    The max-heap is built once from the starting availabilities; a popped
    node is wired to as many random available non-neighbours as its
    *current* availability allows, then retired.
    """
    report = StageReport("stage4_v1")
    before = net.m
    avail = ledger.available_nodes()
    heap = [(-a, v) for v, a in avail.items()]
    heapq.heapify(heap)
    pool = _IndexedSet(avail)
    adj = net.adj
    r = rng.py
    while heap:
        _, v = heapq.heappop(heap)
        if v not in avail:
            continue
        nbrs = adj[v]
        valid = len(pool) - 1 - sum(1 for w in nbrs if w in pool.pos)
        todo = min(avail[v], valid)
        while todo > 0:
            if valid * 4 >= len(pool):
                while True:
                    w = pool.items[r.randrange(len(pool))]
                    if w != v and w not in nbrs:
                        break
                partners = [w]
            else:
                cands = [w for w in pool.items if w != v and w not in nbrs]
                cands.sort()
                partners = r.sample(cands, todo)
            for w in partners:
                _connect(net, ledger, v, w)
                if avail[w] > 1:
                    avail[w] -= 1
                else:
                    del avail[w]
                    pool.remove(w)
            todo -= len(partners)
            valid -= len(partners)
        del avail[v]
        pool.remove(v)
    return _finish(report, before, net)


def stage4_v2_degree_fit(net: Graph, real_graph: Graph | None, params: BlockParams,
                         clustering: Clustering | None, ledger: AvailableDegreeLedger,
                         rng: RngStream) -> StageReport:
    """Top up inter-cluster edge counts with an SBM over the available nodes.

    The missing count per cluster pair is empirical minus synthetic, with
    the diagonal, negative entries, and clusters without available nodes
    zeroed. Node weights are the residual availabilities.
    """
    report = StageReport("stage4_v2")
    before = net.m
    if real_graph is not None:
        block_of = ({v: clustering.assignment[v] for v in clustering.clustered_nodes()}
                    if clustering is not None else params.block_of)
        empirical = block_pair_counts(real_graph, block_of)
    else:
        empirical = params.edge_count_matrix
    synthetic = block_pair_counts(net, params.block_of)
    avail = ledger.available_nodes()
    blocks: dict[str, list[int]] = {}
    for v in avail:
        blocks.setdefault(params.block_of[v], []).append(v)

    delta = {}
    for (r, s), m in sorted(empirical.items()):
        if r == s or r not in blocks or s not in blocks:
            continue
        d = m - synthetic.get(pair_key(r, s), 0)
        if d > 0:
            delta[(r, s)] = d
    report.details["delta"] = {f"{r}|{s}": d for (r, s), d in delta.items()}
    if not delta:
        return _finish(report, before, net)

    draw = draw_block_edges(blocks, avail, list(delta.items()), rng, net.nodes())
    extra, simp = simplify(draw)
    report.details["drawn"] = len(draw)
    report.details["removed_in_simplify"] = simp.removed
    per_cluster: dict[str, int] = {}
    for u, v in extra.edges():
        if _connect(net, ledger, u, v):
            for c in (params.block_of[u], params.block_of[v]):
                per_cluster[c] = per_cluster.get(c, 0) + 1
    report.per_cluster = dict(sorted(per_cluster.items()))
    return _finish(report, before, net)


def build_outlier_step(params: OutlierParams, clustering: Clustering,
                       rng: RngStream) -> tuple[Graph, StageReport]:
    graph, simp = sample_outlier_network(params, clustering, rng)
    report = StageReport("step2_outliers", edges_added=graph.m)
    report.details = {
        "target_edges": params.total_edges(),
        "target_outlier_cluster_edges": sum(params.outlier_block_counts.values()),
        "outlier_outlier_edges": len(params.outlier_outlier_edges),
        "removed_self_loops": simp.self_loops,
        "removed_parallel": simp.parallel,
    }
    return graph, report


def merge(clustered_net: Graph, outlier_net: Graph) -> Graph:
    """Union of the two networks; their edge sets must be disjoint."""
    out = clustered_net.copy()
    for v in outlier_net.adj:
        out.adj.setdefault(v, set())
    for u, v in outlier_net.edges():
        if not out.add_edge(u, v):
            raise GraphError(f"edge ({u}, {v}) present in both networks")
    return out


def stage0(params: BlockParams, seed: int) -> tuple[Graph, StageReport]:
    """Degree-corrected SBM draw of the clustered subnetwork, simplified."""
    draw = sample_dcsbm(params, RngStream(seed, "stage0"))
    net, simp = simplify(draw)
    report = StageReport("stage0", edges_added=net.m)
    report.details = {"drawn": len(draw), "removed_self_loops": simp.self_loops,
                      "removed_parallel": simp.parallel}
    return net, report


def repair(net: Graph, params: BlockParams, variant: str, seed: int,
           real_graph: Graph | None = None, clustering: Clustering | None = None,
           snapshots: dict | None = None) -> list[StageReport]:
    """Run Stages 1-4 in place on a Stage-0 network."""
    if variant not in ("v1", "v2"):
        raise ValueError(f"unknown repair variant {variant!r}")
    ledger = AvailableDegreeLedger(params.degree_target, net)
    reports = [
        stage1_enforce_min_degree(net, params, ledger, RngStream(seed, "stage1")),
        stage2_connect_clusters(net, params, ledger, RngStream(seed, "stage2")),
        stage3_raise_connectivity(net, params, ledger, RngStream(seed, "stage3")),
    ]
    if snapshots is not None:
        snapshots["stage3"] = net.copy()
    rng4 = RngStream(seed, "stage4")
    if variant == "v1":
        reports.append(stage4_v1_degree_fit(net, ledger, rng4))
    else:
        reports.append(stage4_v2_degree_fit(net, real_graph, params, clustering, ledger, rng4))
    for rep in reports:
        for w in rep.warnings:
            log.warning("%s: %s", rep.stage, w)
    return reports


def run_from_params(params: BlockParams, outlier: OutlierParams, variant: str, seed: int,
                    real_graph: Graph | None = None, clustering: Clustering | None = None,
                    base: tuple[Graph, StageReport] | None = None,
                    snapshots: dict | None = None) -> tuple[Graph, list[StageReport]]:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if clustering is None:
        clustering = params.clustering()
    if base is None:
        net, rep0 = stage0(params, seed)
    else:
        net, rep0 = base[0].copy(), base[1]
    if snapshots is not None:
        snapshots["stage0"] = net.copy()
    reports = [rep0]
    if variant != "sbm-only":
        reports += repair(net, params, variant, seed, real_graph, clustering, snapshots)
    outlier_net, rep2 = build_outlier_step(outlier, clustering, RngStream(seed, "step2"))
    reports.append(rep2)
    out = merge(net, outlier_net)
    out.labels = params.labels
    reports.append(StageReport("step3_merge", edges_added=outlier_net.m,
                               details={"total_edges": out.m}))
    return out, reports


def run_reccs(graph: Graph, clustering: Clustering, variant: str = "v1", seed: int = 0,
              snapshots: dict | None = None) -> tuple[Graph, list[StageReport]]:
    """Full pipeline: extract, Stage 0, repair (unless sbm-only), outliers, merge."""
    params = extract_block_params(graph, clustering)
    outlier = extract_outlier_params(graph, clustering)
    return run_from_params(params, outlier, variant, seed, real_graph=graph,
                           clustering=clustering, snapshots=snapshots)


def replicate_seeds(master_seed: int, count: int) -> list[int]:
    return [derive_seed(master_seed, f"replicate/{i}") & ((1 << 63) - 1)
            for i in range(count)]
