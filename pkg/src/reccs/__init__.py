"""Synthetic clustered networks with repaired cluster edge connectivity."""

__version__ = "0.1.0"

from .graph import Clustering, Graph, induced_subgraph, load_clustering, load_edge_list, write_edge_list
from .mincut import connected_components, min_edge_cut
from .params import extract_block_params, extract_outlier_params
from .pipeline import run_reccs
from .rng import RngStream

__all__ = [
    "Clustering", "Graph", "RngStream", "connected_components", "extract_block_params",
    "extract_outlier_params", "induced_subgraph", "load_clustering", "load_edge_list",
    "min_edge_cut", "run_reccs", "write_edge_list",
]
