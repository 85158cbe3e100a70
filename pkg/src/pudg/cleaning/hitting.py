"""Fewest-distinct-values cleaning via minimum hitting sets.

Picking one allowed value per node while using as few distinct values as
possible is exactly a minimum hitting set over the allowed-value sets; the
problem is NP-hard even with two options per node, so the exact solver is
branch-and-bound behind a size cap with a flagged greedy fallback.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Hashable

from ..datagraph import DataGraph

DEFAULT_EXACT_CAP = 64


@dataclass(frozen=True)
class MinDistinctResult:
    assignment: dict
    values_used: frozenset[str]
    exact: bool


def _greedy_hitting_set(families: list[frozenset[str]]) -> frozenset[str]:
    unhit = list(families)
    chosen: set[str] = set()
    while unhit:
        counts: dict[str, int] = {}
        for family in unhit:
            for value in family:
                counts[value] = counts.get(value, 0) + 1
        best = min(counts, key=lambda value: (-counts[value], value))
        chosen.add(best)
        unhit = [family for family in unhit if best not in family]
    return frozenset(chosen)


def _disjoint_lower_bound(families: list[frozenset[str]]) -> int:
    bound = 0
    blocked: set[str] = set()
    for family in sorted(families, key=lambda f: (len(f), sorted(f))):
        if not (family & blocked):
            bound += 1
            blocked |= family
    return bound


def minimum_hitting_set(
    families, exact_cap: int = DEFAULT_EXACT_CAP
) -> tuple[frozenset[str], bool]:
    """A smallest set of values intersecting every family.

    Exact branch-and-bound while the summed family sizes stay within
    `exact_cap`; above it, a greedy cover is returned flagged inexact.
    Families must all be non-empty.
    """
    distinct = sorted(
        {frozenset(f) for f in families}, key=lambda f: (len(f), sorted(f))
    )
    if any(not f for f in distinct):
        raise ValueError("every allowed-value set must be non-empty")
    if not distinct:
        return frozenset(), True

    # Families containing another family are hit whenever the smaller one is.
    minimal: list[frozenset[str]] = []
    for family in distinct:
        if not any(kept < family for kept in minimal):
            minimal.append(family)

    if sum(len(f) for f in minimal) > exact_cap:
        return _greedy_hitting_set(minimal), False

    best = _greedy_hitting_set(minimal)

    def search(unhit: list[frozenset[str]], chosen: set[str]) -> None:
        nonlocal best
        if not unhit:
            if len(chosen) < len(best):
                best = frozenset(chosen)
            return
        if len(chosen) + _disjoint_lower_bound(unhit) >= len(best):
            return
        branch = min(unhit, key=lambda f: (len(f), sorted(f)))
        for value in sorted(branch):
            chosen.add(value)
            search([f for f in unhit if value not in f], chosen)
            chosen.remove(value)

    search(minimal, set())
    return best, True


def _assign_from(choices: Mapping[Hashable, frozenset[str]], chosen: frozenset[str]) -> dict:
    return {key: min(sorted(opts & chosen)) for key, opts in choices.items()}


def clean_min_distinct(
    observed: DataGraph,
    choices: Mapping[int, object],
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> MinDistinctResult:
    """Pick each node's data value from its allowed set, minimizing how many
    distinct values appear overall."""
    normalized = {int(v): frozenset(map(str, opts)) for v, opts in choices.items()}
    for v in observed.nodes:
        if v not in normalized:
            raise ValueError(f"node {v} has no allowed-value set")
    chosen, exact = minimum_hitting_set(normalized.values(), exact_cap)
    return MinDistinctResult(_assign_from(normalized, chosen), chosen, exact)


def clean_min_distinct_edge_labels(
    observed: DataGraph,
    choices: Mapping[tuple[int, int], object],
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> MinDistinctResult:
    """The edge variant: pick each connected pair's label from its allowed
    set, minimizing the number of distinct labels. Ground elements are the
    (source, target) pairs; the hitting-set core is shared."""
    normalized = {
        (int(s), int(t)): frozenset(map(str, opts)) for (s, t), opts in choices.items()
    }
    connected = {(s, t) for (s, _, t) in observed.edges}
    for pair in connected:
        if pair not in normalized:
            raise ValueError(f"edge pair {pair} has no allowed-label set")
    chosen, exact = minimum_hitting_set(normalized.values(), exact_cap)
    return MinDistinctResult(_assign_from(normalized, chosen), chosen, exact)
