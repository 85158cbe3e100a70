"""Repairs that only touch data values: make an expression hold, or make it
hold as cheaply as possible.

The searches assign values node by node and prune with a three-valued
evaluation: with some nodes still unassigned, every positive operator has
computable lower/upper bounds on its denotation (unknown data widens data
tests both ways, set operators are monotone). A branch dies when the upper
bound already misses the goal and succeeds early when the lower bound
already meets it, in which case any completion works.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from ..datagraph import DataGraph, fresh_symbols
from ..errors import BudgetExceededError, FragmentError, InfeasibleError, UnknownLabelError
from ..gxpath import ast
from ..gxpath.analysis import (
    certificate_bound,
    is_positive,
    mentioned_data_values,
    mentioned_labels,
    uses_path_equality,
    uses_path_inequality,
)
from ..gxpath.ast import Expr, NodeExpr, PathExpr
from ..gxpath.evaluator import (
    compose,
    reflexive_transitive_closure,
    satisfies_at,
    satisfies_global,
)
from ..gxpath.transforms import eliminate_star
from .values import TransitionCost

Pair = tuple[int, int]
Relation = frozenset[Pair]


class _Bounds:
    """Lower/upper denotation bounds under a partial data assignment.

    data maps every node to a value or to None (unknown). For every
    completion of the unknowns, lo <= truth <= hi holds pointwise.
    """

    def __init__(self, g: DataGraph, data: Mapping[int, str | None]):
        self.g = g
        self.data = data
        self._rels: dict[PathExpr, tuple[Relation, Relation]] = {}
        self._sats: dict[NodeExpr, tuple[frozenset[int], frozenset[int]]] = {}

    def rel(self, p: PathExpr) -> tuple[Relation, Relation]:
        out = self._rels.get(p)
        if out is None:
            out = self._rels[p] = self._rel(p)
        return out

    def sat(self, e: NodeExpr) -> tuple[frozenset[int], frozenset[int]]:
        out = self._sats.get(e)
        if out is None:
            out = self._sats[e] = self._sat(e)
        return out

    def _rel(self, p: PathExpr) -> tuple[Relation, Relation]:
        g = self.g
        if isinstance(p, ast.Epsilon):
            identity = frozenset((v, v) for v in g.nodes)
            return identity, identity
        if isinstance(p, ast.Wildcard):
            exact = frozenset((s, t) for (s, _, t) in g.edges)
            return exact, exact
        if isinstance(p, ast.Label):
            exact = frozenset((s, t) for (s, l, t) in g.edges if l == p.name)
            return exact, exact
        if isinstance(p, ast.InverseLabel):
            exact = frozenset((t, s) for (s, l, t) in g.edges if l == p.name)
            return exact, exact
        if isinstance(p, ast.Test):
            lo_n, hi_n = self.sat(p.cond)
            return frozenset((v, v) for v in lo_n), frozenset((v, v) for v in hi_n)
        if isinstance(p, ast.Concat):
            lo_l, hi_l = self.rel(p.left)
            lo_r, hi_r = self.rel(p.right)
            return compose(lo_l, lo_r), compose(hi_l, hi_r)
        if isinstance(p, ast.Union):
            lo_l, hi_l = self.rel(p.left)
            lo_r, hi_r = self.rel(p.right)
            return lo_l | lo_r, hi_l | hi_r
        if isinstance(p, ast.Intersect):
            lo_l, hi_l = self.rel(p.left)
            lo_r, hi_r = self.rel(p.right)
            return lo_l & lo_r, hi_l & hi_r
        if isinstance(p, ast.Star):
            lo, hi = self.rel(p.inner)
            return (
                reflexive_transitive_closure(lo, self.g.nodes),
                reflexive_transitive_closure(hi, self.g.nodes),
            )
        if isinstance(p, ast.Repeat):
            lo, hi = self.rel(p.inner)
            return self._repeat(lo, p.lo, p.hi), self._repeat(hi, p.lo, p.hi)
        raise FragmentError(f"bounded evaluation needs positive expressions, got {p!r}")

    def _repeat(self, base: Relation, lo: int, hi: int) -> Relation:
        identity = frozenset((v, v) for v in self.g.nodes)
        power = identity
        out: set[Pair] = set() if lo > 0 else set(identity)
        for k in range(1, hi + 1):
            power = compose(power, base)
            if k >= lo:
                out |= power
        return frozenset(out)

    def _sat(self, e: NodeExpr) -> tuple[frozenset[int], frozenset[int]]:
        data = self.data
        nodes = self.g.nodes
        if isinstance(e, ast.DataEq):
            sure = frozenset(v for v in nodes if data[v] == e.value)
            return sure, sure | frozenset(v for v in nodes if data[v] is None)
        if isinstance(e, ast.DataNeq):
            sure = frozenset(v for v in nodes if data[v] is not None and data[v] != e.value)
            return sure, sure | frozenset(v for v in nodes if data[v] is None)
        if isinstance(e, ast.And):
            lo_l, hi_l = self.sat(e.left)
            lo_r, hi_r = self.sat(e.right)
            return lo_l & lo_r, hi_l & hi_r
        if isinstance(e, ast.Or):
            lo_l, hi_l = self.sat(e.left)
            lo_r, hi_r = self.sat(e.right)
            return lo_l | lo_r, hi_l | hi_r
        if isinstance(e, ast.Exists):
            lo, hi = self.rel(e.path)
            return (
                frozenset(v for (v, _) in lo),
                frozenset(v for (v, _) in hi),
            )
        if isinstance(e, (ast.PathEq, ast.PathNeq)):
            lo_l, hi_l = self.rel(e.left)
            lo_r, hi_r = self.rel(e.right)
            if isinstance(e, ast.PathEq):
                sure = self._compare(lo_l, lo_r, self._definitely_equal)
                maybe = self._compare(hi_l, hi_r, self._possibly_equal)
            else:
                sure = self._compare(lo_l, lo_r, self._definitely_unequal)
                maybe = self._compare(hi_l, hi_r, self._possibly_unequal)
            return sure, maybe
        raise FragmentError(f"bounded evaluation needs positive expressions, got {e!r}")

    def _compare(self, left: Relation, right: Relation, ok) -> frozenset[int]:
        left_by_src: dict[int, list[int]] = {}
        for v, w in left:
            left_by_src.setdefault(v, []).append(w)
        right_by_src: dict[int, list[int]] = {}
        for v, w in right:
            right_by_src.setdefault(v, []).append(w)
        out = set()
        for v, lefts in left_by_src.items():
            rights = right_by_src.get(v)
            if not rights:
                continue
            if any(ok(w1, w2) for w1 in lefts for w2 in rights):
                out.add(v)
        return frozenset(out)

    def _definitely_equal(self, w1: int, w2: int) -> bool:
        if w1 == w2:
            return True
        a, b = self.data[w1], self.data[w2]
        return a is not None and a == b

    def _possibly_equal(self, w1: int, w2: int) -> bool:
        if w1 == w2:
            return True
        a, b = self.data[w1], self.data[w2]
        return a is None or b is None or a == b

    def _definitely_unequal(self, w1: int, w2: int) -> bool:
        a, b = self.data[w1], self.data[w2]
        return w1 != w2 and a is not None and b is not None and a != b

    def _possibly_unequal(self, w1: int, w2: int) -> bool:
        if w1 == w2:
            return False
        a, b = self.data[w1], self.data[w2]
        return a is None or b is None or a != b


@dataclass
class _SearchBudget:
    remaining: int

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise BudgetExceededError("repair search budget exhausted")


def _value_pool(cond: Expr, g: DataGraph, slots: int) -> list[str]:
    """Candidate values for a data-only repair: the constants the expression
    mentions plus fresh fillers.

    One filler suffices unless the expression can demand *distinct*
    unmentioned values through a path-inequality test, in which case one
    per assignable node is needed.
    """
    mentioned = sorted(mentioned_data_values(cond))
    fillers = slots if uses_path_inequality(cond) else 1
    fresh = fresh_symbols(set(mentioned) | set(g.data.values()), fillers, "fill")
    return mentioned + fresh


def _goal(cond: Expr, bounds: _Bounds, origin: int | None) -> str:
    """'yes' if every completion satisfies, 'no' if none can, else 'open'."""
    if isinstance(cond, NodeExpr):
        lo, hi = bounds.sat(cond)
        if origin is None:
            target = bounds.g.nodes
            if not (target <= hi):
                return "no"
            return "yes" if target <= lo else "open"
        if origin not in hi:
            return "no"
        return "yes" if origin in lo else "open"
    lo, hi = bounds.rel(cond)
    all_pairs = frozenset((u, v) for u in bounds.g.nodes for v in bounds.g.nodes)
    if not (all_pairs <= hi):
        return "no"
    return "yes" if all_pairs <= lo else "open"


def _search_assignment(
    g: DataGraph,
    pool: list[str],
    cond: Expr,
    origin: int | None,
    budget: _SearchBudget,
) -> dict[int, str] | None:
    """Backtracking search for a full data assignment satisfying the goal.

    Every node of g is assignable. Returns a complete node -> value map or
    None. Deterministic: nodes in sorted order, pool order as given.
    """
    order = sorted(g.nodes)
    data: dict[int, str | None] = {v: None for v in order}
    filler = pool[-1]

    def walk(index: int) -> dict[int, str] | None:
        budget.spend()
        verdict = _goal(cond, _Bounds(g, data), origin)
        if verdict == "no":
            return None
        if verdict == "yes":
            return {v: (data[v] if data[v] is not None else filler) for v in order}
        if index == len(order):
            return None
        node = order[index]
        for value in pool:
            data[node] = value
            found = walk(index + 1)
            if found is not None:
                return found
            data[node] = None
        return None

    return walk(0)


def _check_expression(cond: Expr, g: DataGraph, *, forbid_path_eq: bool = False) -> None:
    if not is_positive(cond):
        raise FragmentError("data repairs need the positive fragment")
    if forbid_path_eq and uses_path_equality(cond):
        raise FragmentError(
            "cost-minimal origin repair does not support path comparisons with equality"
        )
    foreign = mentioned_labels(cond) - g.edge_alphabet
    if foreign:
        raise UnknownLabelError(f"labels {sorted(foreign)} are not in the graph's alphabet")


def isomorphic_repair(
    g: DataGraph,
    cond: NodeExpr,
    origin: int | None = None,
    *,
    search_budget: int = 2_000_000,
) -> DataGraph | None:
    """A graph equal to g up to data values that satisfies the condition
    (at the origin when given, at every node otherwise), or None.

    With an origin the condition's stars must sit on atomic labels: they
    are materialized away, and only induced subgraphs up to the resulting
    certificate bound need to be searched, which keeps the fixed-expression
    case polynomial. The global search assigns all nodes, backtracking with
    bound-based pruning, and is budget-guarded.
    """
    _check_expression(cond, g)
    budget = _SearchBudget(search_budget)
    if origin is None:
        if satisfies_global(g, cond):
            return g
        pool = _value_pool(cond, g, slots=len(g.nodes))
        found = _search_assignment(g, pool, cond, None, budget)
        return g.with_data(found) if found is not None else None

    if origin not in g.nodes:
        raise ValueError(f"origin {origin} is not a node of the graph")
    work_g, work_cond = eliminate_star(g, cond)
    if satisfies_at(work_g, origin, work_cond):
        return g
    cap = min(certificate_bound(work_cond), len(g.nodes))
    pool = _value_pool(work_cond, work_g, slots=cap)
    others = sorted(work_g.nodes - {origin})
    for size in range(1, cap + 1):
        for extra in combinations(others, size - 1):
            sub = work_g.induced({origin, *extra})
            found = _search_assignment(sub, pool, work_cond, origin, budget)
            if found is not None:
                return g.with_data(found)
    return None


def clean_origin_expression(
    g: DataGraph,
    origin: int,
    cond: NodeExpr,
    delta: TransitionCost,
    *,
    search_budget: int = 5_000_000,
) -> DataGraph:
    """Among the graphs equal to g up to data values that satisfy the
    condition at the origin, one of minimal total transition cost.

    Candidate values per node are the mentioned constants, the node's own
    observed value, and a cheapest-first prefix of the cost enumerator long
    enough to contain an optimal choice. Nodes outside the witnessing
    subgraph keep their values (free, since unchanged values cost nothing).
    """
    _check_expression(cond, g, forbid_path_eq=True)
    if origin not in g.nodes:
        raise ValueError(f"origin {origin} is not a node of the graph")
    work_g, work_cond = eliminate_star(g, cond)
    cap = min(certificate_bound(work_cond), len(g.nodes))
    mentioned = sorted(mentioned_data_values(work_cond))
    prefix_len = len(g.nodes) + len(mentioned)

    pools: dict[int, list[str]] = {}
    for v in sorted(g.nodes):
        observed_value = g.data_value(v)
        if delta.cost(observed_value, observed_value) != 0:
            raise ValueError("transition costs must vanish on unchanged values")
        options = set(mentioned) | {observed_value}
        options.update(delta.prefix(observed_value, prefix_len))
        pools[v] = sorted(options)

    best: tuple[Fraction, tuple, DataGraph] | None = None
    remaining = search_budget
    others = sorted(g.nodes - {origin})
    for size in range(1, cap + 1):
        for extra in combinations(others, size - 1):
            sub_nodes = sorted({origin, *extra})
            sub = work_g.induced(sub_nodes)
            for picked in product(*(pools[v] for v in sub_nodes)):
                remaining -= 1
                if remaining < 0:
                    raise BudgetExceededError("origin repair budget exhausted")
                cost = sum(
                    (delta.cost(new, g.data_value(v)) for v, new in zip(sub_nodes, picked)),
                    Fraction(0),
                )
                if best is not None and cost > best[0]:
                    continue
                repaired = g.with_data(dict(zip(sub_nodes, picked)))
                key = (cost, repaired.canonical_key())
                if best is not None and key >= (best[0], best[1]):
                    continue
                if satisfies_at(sub.with_data(dict(zip(sub_nodes, picked))), origin, work_cond):
                    best = (cost, repaired.canonical_key(), repaired)
    if best is None:
        raise InfeasibleError("no data assignment satisfies the condition at the origin")
    return best[2]
