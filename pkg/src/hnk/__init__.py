"""Construction and exhaustive verification of the subset graphs H(n, k)."""

__version__ = "0.1.0"

from .hgraph import Component, GraphParams, HGraph, build_graph
from .subsets import SubsetId, UsageError

__all__ = ["Component", "GraphParams", "HGraph", "SubsetId", "UsageError", "build_graph",
           "__version__"]
