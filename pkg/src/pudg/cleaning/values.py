"""Data-value cleaners built on exact assignment solving.

Two settings where the repair is a reassignment of node data values:

- every value used exactly once with per-cell confidence weights
  (clean_fixed_assignment): a max-product perfect matching;
- a target histogram of values plus per-transition costs
  (clean_cardinality): a min-cost perfect matching against value copies.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from ..datagraph import DataGraph
from ..errors import InfeasibleError
from .assignment import max_product_assignment, min_cost_assignment


@dataclass(frozen=True)
class TransitionCost:
    """Per-value rewrite costs as seen by the noisy observer.

    cost(c, d) is the price of the observer turning a clean value c into an
    observed value d; cost(c, c) must be 0. candidates_for(d) enumerates
    clean values c in nondecreasing cost(c, d) order and must eventually
    reach every value of the universe.
    """

    cost: Callable[[str, str], Fraction]
    candidates_for: Callable[[str], Iterator[str]]

    def prefix(self, observed_value: str, count: int) -> list[str]:
        """The first `count` cheapest clean candidates for an observed value."""
        out: list[str] = []
        for value in self.candidates_for(observed_value):
            out.append(value)
            if len(out) >= count:
                break
        return out

    @classmethod
    def from_table(
        cls,
        table: Mapping[tuple[str, str], int | Fraction],
        universe: Iterable[str],
        default: int | Fraction = 1,
    ) -> TransitionCost:
        """Costs from a sparse (clean, observed) -> cost table; unlisted
        distinct pairs cost `default`, identical values cost 0."""
        values = sorted(set(universe))
        fixed = {pair: Fraction(c) for pair, c in table.items()}

        def cost(c: str, d: str) -> Fraction:
            if c == d:
                return Fraction(0)
            return fixed.get((c, d), Fraction(default))

        def candidates_for(d: str) -> Iterator[str]:
            return iter(sorted(values, key=lambda c: (cost(c, d), c)))

        return cls(cost, candidates_for)

    @classmethod
    def uniform(cls, universe: Iterable[str]) -> TransitionCost:
        """Every change costs 1."""
        return cls.from_table({}, universe)


def transition_cost_total(delta: TransitionCost, clean: DataGraph, observed: DataGraph) -> Fraction:
    """The summed per-node cost of the observer turning clean into observed."""
    if clean.nodes != observed.nodes:
        raise ValueError("graphs must share their node set")
    return sum(
        (delta.cost(clean.data_value(v), observed.data_value(v)) for v in clean.nodes),
        Fraction(0),
    )


def histogram_deviation(g: DataGraph, target: Mapping[str, int]) -> int:
    """Total absolute difference between the graph's value counts and the target."""
    counts: dict[str, int] = {}
    for v in g.nodes:
        counts[g.data_value(v)] = counts.get(g.data_value(v), 0) + 1
    keys = set(counts) | set(target)
    return sum(abs(target.get(c, 0) - counts.get(c, 0)) for c in keys)


def clean_fixed_assignment(
    observed: DataGraph,
    known: Mapping[int, str],
    weight: Callable[[str, int], Fraction] | Mapping[tuple[str, int], Fraction],
) -> DataGraph:
    """Reassign the observed graph's value set bijectively to its nodes,
    keeping the `known` assignments and maximizing the product of
    weight(value, node) over the free cells.

    The observed graph must use each of its data values exactly once.
    Zero-weight cells are forbidden outright; if they block every bijection
    the instance is infeasible.
    """
    values = sorted(observed.data.values())
    if len(set(values)) != len(observed.nodes):
        raise ValueError("observed data values must be pairwise distinct")
    if isinstance(weight, Mapping):
        table = {k: Fraction(w) for k, w in weight.items()}
        weight_of = lambda value, node: table.get((value, node), Fraction(0))
    else:
        weight_of = lambda value, node: Fraction(weight(value, node))

    known = {int(v): str(c) for v, c in known.items()}
    if len(set(known.values())) != len(known):
        raise ValueError("known assignments must be injective")
    for node, value in known.items():
        if node not in observed.nodes:
            raise ValueError(f"known assignment names absent node {node}")
        if value not in values:
            raise ValueError(f"known assignment uses foreign value {value!r}")

    free_nodes = sorted(observed.nodes - set(known))
    free_values = sorted(set(values) - set(known.values()))
    matrix = [[weight_of(value, node) for node in free_nodes] for value in free_values]
    cols, _ = max_product_assignment(matrix)

    assignment = dict(known)
    for row, col in enumerate(cols):
        assignment[free_nodes[col]] = free_values[row]
    return observed.with_data(assignment)


def clean_cardinality(
    observed: DataGraph,
    target: Mapping[str, int],
    delta: TransitionCost,
) -> DataGraph:
    """The cheapest data reassignment whose value counts match the target
    histogram exactly.

    Solved as a min-cost perfect matching between nodes and target-value
    copies; a value with target count t contributes t identical columns, so
    the matrix stays n-by-n and a perfect matching always exists.
    """
    nodes = sorted(observed.nodes)
    total = sum(target.values())
    if total != len(nodes):
        raise ValueError(
            f"target histogram covers {total} nodes, graph has {len(nodes)}"
        )
    if any(count < 0 for count in target.values()):
        raise ValueError("target counts must be nonnegative")

    columns: list[str] = []
    for value in sorted(target):
        columns.extend([value] * target[value])
    matrix = [
        [delta.cost(value, observed.data_value(v)) for value in columns] for v in nodes
    ]
    cols, _ = min_cost_assignment(matrix)
    assignment = {v: columns[j] for v, j in zip(nodes, cols)}
    return observed.with_data(assignment)
