"""Command line front end: ``reccs extract|generate|evaluate|replicate``.

Exit codes: 0 success, 1 internal error, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .fixtures import clustered_fixture
from .graph import (Clustering, Graph, GraphError, load_clustering, load_edge_list,
                    write_clustering, write_edge_list)
from .metrics import full_report, summarize, write_csv
from .params import (extract_block_params, extract_outlier_params, load_params,
                     save_params)
from .pipeline import VARIANTS, replicate_seeds, run_from_params, stage0

log = logging.getLogger("reccs")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    graph: str | None = None
    clustering: str | None = None
    params: str | None = None
    synth: str | None = None
    variant: str = "v1"
    seed: int | None = None
    out: str = "."
    replicates: int = 1
    paired: str = "by-id"
    emit_intermediates: bool = False
    figures: bool = False

    def validate(self, need_seed: bool = False, min_replicates: int = 1) -> None:
        if self.variant not in VARIANTS:
            raise UsageError(f"--variant must be one of {', '.join(VARIANTS)}")
        if self.paired not in ("by-id", "sorted"):
            raise UsageError("--paired must be by-id or sorted")
        if need_seed and self.seed is None:
            raise UsageError("--seed is required")
        if self.replicates < min_replicates:
            raise UsageError(f"--replicates must be >= {min_replicates}")


def _read_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"config file not found: {path}")
    if p.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    else:
        with open(p) as fh:
            data = json.load(fh)
    return {k.replace("-", "_"): v for k, v in data.items()}


def _config(args: argparse.Namespace) -> RunConfig:
    values = _read_config(args.config) if getattr(args, "config", None) else {}
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    # explicit flags win over the config file
    for key in known:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


def _need_file(path: str | None, what: str) -> Path:
    if not path:
        raise UsageError(f"--{what} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {path}")
    return p


def _sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_inputs(cfg: RunConfig) -> tuple[Graph, Clustering]:
    graph = load_edge_list(_need_file(cfg.graph, "graph"))
    clustering = load_clustering(_need_file(cfg.clustering, "clustering"), graph)
    return graph, clustering


def _write_json(data, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_synthetic(path: str | Path, real: Graph) -> Graph:
    """Edge list read onto the real graph's label table (isolated nodes kept)."""
    index = {lab: i for i, lab in enumerate(real.labels or [str(v) for v in range(real.n)])}
    synth = Graph.empty(real.n, labels=real.labels)
    other = load_edge_list(path)
    for u, v in other.edges():
        a, b = other.label(u), other.label(v)
        if a not in index or b not in index:
            raise GraphError(f"synthetic edge ({a}, {b}) uses a node unknown to the real graph")
        synth.add_edge(index[a], index[b])
    return synth


def cmd_extract(cfg: RunConfig) -> int:
    graph, clustering = _load_inputs(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    block = extract_block_params(graph, clustering)
    outlier = extract_outlier_params(graph, clustering)
    save_params(block, outlier, out / "params.json")
    log.info("wrote %s (%d clusters, %d outliers)", out / "params.json",
             len(block.connectivity_req), len(outlier.outlier_ids))
    return 0


def _params_for(cfg: RunConfig):
    """Parameters from --params, else extracted from --graph/--clustering."""
    if cfg.params:
        block, outlier = load_params(_need_file(cfg.params, "params"))
        real = None
        if cfg.graph:
            real = load_edge_list(_need_file(cfg.graph, "graph"))
        return block, outlier, real, block.clustering(), {"params": _sha256(cfg.params)}
    graph, clustering = _load_inputs(cfg)
    hashes = {"graph": _sha256(cfg.graph), "clustering": _sha256(cfg.clustering)}
    return (extract_block_params(graph, clustering), extract_outlier_params(graph, clustering),
            graph, clustering, hashes)


def _emit_run(out: Path, graph: Graph, clustering: Clustering, reports, manifest: dict,
              snapshots: dict | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(graph, out / "synthetic.tsv")
    write_clustering(clustering, out / "clustering.tsv", graph.labels)
    outputs = {"synthetic.tsv": _sha256(out / "synthetic.tsv")}
    for name, snap in (snapshots or {}).items():
        snap.labels = graph.labels
        write_edge_list(snap, out / f"{name}.tsv")
        outputs[f"{name}.tsv"] = _sha256(out / f"{name}.tsv")
    manifest = dict(manifest)
    manifest["stages"] = [r.to_json() for r in reports]
    manifest["outputs"] = outputs
    _write_json(manifest, out / "manifest.json")


def _manifest(cfg: RunConfig, seed: int, hashes: dict) -> dict:
    return {"tool": "reccs", "version": __version__, "variant": cfg.variant,
            "seed": seed, "inputs": hashes}


def cmd_generate(cfg: RunConfig) -> int:
    cfg.validate(need_seed=True)
    block, outlier, real, clustering, hashes = _params_for(cfg)
    snapshots = {} if cfg.emit_intermediates else None
    graph, reports = run_from_params(block, outlier, cfg.variant, cfg.seed, real_graph=real,
                                     clustering=clustering, snapshots=snapshots)
    _emit_run(Path(cfg.out), graph, clustering, reports, _manifest(cfg, cfg.seed, hashes),
              snapshots)
    log.info("wrote %s (%d nodes, %d edges)", Path(cfg.out) / "synthetic.tsv", graph.n, graph.m)
    return 0


def _evaluate(real: Graph, synth: Graph, clustering: Clustering, cfg: RunConfig,
              out: Path, metadata: dict):
    report = full_report(real, synth, clustering, paired=cfg.paired, metadata=metadata)
    out.mkdir(parents=True, exist_ok=True)
    report.write_json(out / "report.json")
    write_csv([report], out / "report.csv")
    if cfg.figures:
        from .plots import plot_fit
        plot_fit(real, synth, clustering, out)
    return report


def cmd_evaluate(cfg: RunConfig) -> int:
    cfg.validate()
    real, clustering = _load_inputs(cfg)
    synth = load_synthetic(_need_file(cfg.synth, "synth"), real)
    meta = {"real": _sha256(cfg.graph), "synth": _sha256(cfg.synth),
            "clustering": _sha256(cfg.clustering)}
    if cfg.seed is not None:
        meta["seed"] = cfg.seed
    report = _evaluate(real, synth, clustering, cfg, Path(cfg.out), meta)
    for k, v in report.metrics.items():
        print(f"{k}\t{v}")
    return 0


def cmd_replicate(cfg: RunConfig) -> int:
    cfg.validate(need_seed=True, min_replicates=2)
    if cfg.variant == "sbm-only":
        raise UsageError("replicate repairs a shared SBM base; use --variant v1 or v2")
    real, clustering = _load_inputs(cfg)
    hashes = {"graph": _sha256(cfg.graph), "clustering": _sha256(cfg.clustering)}
    block = extract_block_params(real, clustering)
    outlier = extract_outlier_params(real, clustering)
    base = stage0(block, cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    base_graph = base[0].copy()
    base_graph.labels = real.labels
    write_edge_list(base_graph, out / "base.tsv")

    reports = []
    for i, seed in enumerate(replicate_seeds(cfg.seed, cfg.replicates)):
        sub = out / f"replicate_{i}"
        snapshots = {} if cfg.emit_intermediates else None
        graph, stages = run_from_params(block, outlier, cfg.variant, seed, real_graph=real,
                                        clustering=clustering, base=base, snapshots=snapshots)
        manifest = _manifest(cfg, seed, hashes)
        manifest["master_seed"] = cfg.seed
        manifest["replicate"] = i
        _emit_run(sub, graph, clustering, stages, manifest, snapshots)
        meta = {"replicate": i, "seed": seed, "master_seed": cfg.seed, "variant": cfg.variant}
        reports.append(_evaluate(real, graph, clustering, cfg, sub, meta))

    write_csv(reports, out / "replicates.csv")
    summary = {"master_seed": cfg.seed, "variant": cfg.variant, "replicates": cfg.replicates,
               "base_sha256": _sha256(out / "base.tsv"), "inputs": hashes,
               "summary": summarize(reports)}
    _write_json(summary, out / "summary.json")
    for k, s in summary["summary"].items():
        if s["mean"] is not None:
            print(f"{k}\t{s['mean']:.4f} ± {s['std']:.4f}")
    return 0


def cmd_fixture(args: argparse.Namespace) -> int:
    graph, clustering = clustered_fixture(args.seed, n_clusters=args.clusters,
                                          mean_degree=args.mean_degree, mu=args.mu)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(graph, out / "network.tsv")
    write_clustering(clustering, out / "clustering.tsv", graph.labels)
    log.info("wrote %s (%d nodes, %d edges, %d clusters)", out, graph.n, graph.m,
             len(clustering.clusters))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reccs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_help="random seed"):
        p.add_argument("--config", help="JSON or TOML file with option values")
        p.add_argument("--graph", help="edge list of the real network")
        p.add_argument("--clustering", help="node<TAB>cluster file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help=seed_help)

    p = sub.add_parser("extract", help="write block and outlier parameters as JSON")
    common(p)

    p = sub.add_parser("generate", help="generate a synthetic network")
    common(p)
    p.add_argument("--params", help="params.json from 'extract' (instead of --clustering)")
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--emit-intermediates", action="store_const", const=True,
                   help="also write the Stage-0 and Stage-3 networks")

    p = sub.add_parser("evaluate", help="compare a synthetic network with the real one")
    common(p, "seed recorded in the report metadata")
    p.add_argument("--synth", help="synthetic edge list")
    p.add_argument("--paired", choices=("by-id", "sorted"))
    p.add_argument("--figures", action="store_const", const=True,
                   help="render fit figures next to the report")

    p = sub.add_parser("replicate", help="repeat the repair on one shared SBM base")
    common(p, "master seed")
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--replicates", type=int)
    p.add_argument("--paired", choices=("by-id", "sorted"))
    p.add_argument("--emit-intermediates", action="store_const", const=True)
    p.add_argument("--figures", action="store_const", const=True)

    p = sub.add_parser("fixture", help="write a random clustered test network")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--clusters", type=int, default=50)
    p.add_argument("--mean-degree", type=float, default=8.0)
    p.add_argument("--mu", type=float, default=0.2)
    return parser


COMMANDS = {"extract": cmd_extract, "generate": cmd_generate,
            "evaluate": cmd_evaluate, "replicate": cmd_replicate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "fixture":
            return cmd_fixture(args)
        return COMMANDS[args.command](_config(args))
    except (UsageError, GraphError, OSError, ValueError) as exc:
        print(f"reccs: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
