"""Exact-arithmetic workbench for matching expansions of regular bipartite graphs."""

__version__ = "0.1.0"
