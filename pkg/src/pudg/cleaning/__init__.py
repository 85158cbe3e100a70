"""Data-cleaning solvers: exhaustive argmax, bounded-class enumerations,
matching-based value cleaners, hitting-set cleaners, and expression repairs."""

from .assignment import max_product_assignment, min_cost_assignment
from .core import (
    CleaningResult,
    clean,
    clean_bound,
    clean_node_update,
    clean_subset_bounded,
    clean_superset_bounded,
)
from .hitting import (
    MinDistinctResult,
    clean_min_distinct,
    clean_min_distinct_edge_labels,
    minimum_hitting_set,
)
from .repair import clean_origin_expression, isomorphic_repair
from .values import (
    TransitionCost,
    clean_cardinality,
    clean_fixed_assignment,
    histogram_deviation,
    transition_cost_total,
)

__all__ = [name for name in dir() if not name.startswith("_")]
