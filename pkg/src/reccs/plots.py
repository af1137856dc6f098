"""Fit figures written next to evaluation reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .graph import Clustering, Graph  # noqa: E402
from .metrics import cluster_min_cuts  # noqa: E402


def _scatter(ax, x, y, label):
    x = np.asarray(x)
    y = np.asarray(y)
    hi = max(x.max(initial=0), y.max(initial=0)) + 1
    ax.plot([0, hi], [0, hi], color="0.6", lw=0.8, zorder=0)
    ax.scatter(x, y, s=8, alpha=0.5, lw=0)
    ax.set_xlabel(f"real {label}")
    ax.set_ylabel(f"synthetic {label}")
    ax.set_xlim(0, hi)
    ax.set_ylim(0, hi)


def plot_fit(real: Graph, synth: Graph, clustering: Clustering, out_dir: str | Path,
             fmt: str = "png") -> list[Path]:
    """Degree and per-cluster min-cut scatter plots, one file each."""
    out_dir = Path(out_dir)
    nodes = sorted(real.adj)
    written = []

    fig, ax = plt.subplots(figsize=(4, 4))
    _scatter(ax, [real.degree(v) for v in nodes], [synth.degree(v) for v in nodes], "degree")
    ax.set_title("Node degree")
    fig.tight_layout()
    path = out_dir / f"degree_fit.{fmt}"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    if clustering.clusters:
        fig, ax = plt.subplots(figsize=(4, 4))
        _scatter(ax, cluster_min_cuts(real, clustering), cluster_min_cuts(synth, clustering),
                 "min cut")
        ax.set_title("Cluster minimum edge cut")
        fig.tight_layout()
        path = out_dir / f"min_cut_fit.{fmt}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
