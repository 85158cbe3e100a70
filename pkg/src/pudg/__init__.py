"""Probabilistic unclean data-graphs.

A library and CLI for querying data-graphs with a regular-path language,
inverting noisy observation models exactly (rational arithmetic end to end),
computing most-likely repairs under subset / superset / update observers,
answering queries probabilistically, reweighting priors with soft and hard
constraints, and building the hardness gadgets that exercise all of it.
"""

__version__ = "0.1.0"

from .datagraph import (
    DataGraph,
    equiv_up_to_data,
    is_subgraph,
    missing_edges,
    parse_graph,
    parse_graph_with_origin,
    serialize_graph,
)

__all__ = [
    "DataGraph",
    "equiv_up_to_data",
    "is_subgraph",
    "missing_edges",
    "parse_graph",
    "parse_graph_with_origin",
    "serialize_graph",
    "__version__",
]
