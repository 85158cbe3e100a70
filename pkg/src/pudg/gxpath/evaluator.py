"""Denotational evaluation of path and node expressions over a data-graph.

Evaluation is bottom-up with per-call memoization keyed by (structurally
hashed) AST nodes; there is no short-circuiting, so results match the
set-theoretic definitions exactly. Complements are taken against V x V,
node negation against V.
"""

from __future__ import annotations

from ..datagraph import DataGraph
from ..errors import UnknownLabelError
from . import ast
from .ast import Expr, NodeExpr, PathExpr

Pair = tuple[int, int]
Relation = frozenset[Pair]


def compose(r: Relation, s: Relation) -> Relation:
    by_src: dict[int, set[int]] = {}
    for a, b in s:
        by_src.setdefault(a, set()).add(b)
    out: set[Pair] = set()
    for a, b in r:
        for c in by_src.get(b, ()):
            out.add((a, c))
    return frozenset(out)


def reflexive_transitive_closure(r: Relation, nodes: frozenset[int]) -> Relation:
    succ: dict[int, list[int]] = {v: [] for v in nodes}
    for a, b in r:
        succ[a].append(b)
    out: set[Pair] = set()
    for start in nodes:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.update((start, w) for w in seen)
    return frozenset(out)


class _Evaluator:
    def __init__(self, g: DataGraph):
        self.g = g
        self.all_pairs = frozenset((u, v) for u in g.nodes for v in g.nodes)
        self.identity = frozenset((v, v) for v in g.nodes)
        self._paths: dict[PathExpr, Relation] = {}
        self._nodes: dict[NodeExpr, frozenset[int]] = {}

    def rel(self, p: PathExpr) -> Relation:
        cached = self._paths.get(p)
        if cached is None:
            cached = self._paths[p] = self._rel(p)
        return cached

    def _rel(self, p: PathExpr) -> Relation:
        g = self.g
        if isinstance(p, ast.Epsilon):
            return self.identity
        if isinstance(p, ast.Wildcard):
            return frozenset((s, t) for (s, _, t) in g.edges)
        if isinstance(p, ast.Label):
            self._check_label(p.name)
            return frozenset((s, t) for (s, l, t) in g.edges if l == p.name)
        if isinstance(p, ast.InverseLabel):
            self._check_label(p.name)
            return frozenset((t, s) for (s, l, t) in g.edges if l == p.name)
        if isinstance(p, ast.Test):
            hold = self.sat(p.cond)
            return frozenset((v, v) for v in hold)
        if isinstance(p, ast.Concat):
            return compose(self.rel(p.left), self.rel(p.right))
        if isinstance(p, ast.Union):
            return self.rel(p.left) | self.rel(p.right)
        if isinstance(p, ast.Intersect):
            return self.rel(p.left) & self.rel(p.right)
        if isinstance(p, ast.Star):
            return reflexive_transitive_closure(self.rel(p.inner), g.nodes)
        if isinstance(p, ast.Complement):
            return self.all_pairs - self.rel(p.inner)
        if isinstance(p, ast.Repeat):
            base = self.rel(p.inner)
            power = self.identity
            out: set[Pair] = set() if p.lo > 0 else set(power)
            for k in range(1, p.hi + 1):
                power = compose(power, base)
                if k >= p.lo:
                    out |= power
            return frozenset(out)
        raise TypeError(f"not a path expression: {p!r}")

    def sat(self, e: NodeExpr) -> frozenset[int]:
        cached = self._nodes.get(e)
        if cached is None:
            cached = self._nodes[e] = self._sat(e)
        return cached

    def _sat(self, e: NodeExpr) -> frozenset[int]:
        g = self.g
        if isinstance(e, ast.DataEq):
            return frozenset(v for v in g.nodes if g.data_value(v) == e.value)
        if isinstance(e, ast.DataNeq):
            return frozenset(v for v in g.nodes if g.data_value(v) != e.value)
        if isinstance(e, ast.Not):
            return g.nodes - self.sat(e.inner)
        if isinstance(e, ast.And):
            return self.sat(e.left) & self.sat(e.right)
        if isinstance(e, ast.Or):
            return self.sat(e.left) | self.sat(e.right)
        if isinstance(e, ast.Exists):
            return frozenset(v for (v, _) in self.rel(e.path))
        if isinstance(e, (ast.PathEq, ast.PathNeq)):
            left, right = self.rel(e.left), self.rel(e.right)
            want_equal = isinstance(e, ast.PathEq)
            left_ends: dict[int, set[str]] = {}
            for v, w in left:
                left_ends.setdefault(v, set()).add(g.data_value(w))
            right_ends: dict[int, set[str]] = {}
            for v, w in right:
                right_ends.setdefault(v, set()).add(g.data_value(w))
            out = set()
            for v, lvals in left_ends.items():
                rvals = right_ends.get(v)
                if not rvals:
                    continue
                if want_equal:
                    if lvals & rvals:
                        out.add(v)
                elif len(lvals | rvals) > 1:
                    out.add(v)
            return frozenset(out)
        raise TypeError(f"not a node expression: {e!r}")

    def _check_label(self, name: str) -> None:
        if name not in self.g.edge_alphabet:
            raise UnknownLabelError(f"label {name!r} is not in the graph's alphabet")


def eval_path(g: DataGraph, p: PathExpr) -> Relation:
    """The set of node pairs the path expression denotes over g."""
    return _Evaluator(g).rel(p)


def eval_node(g: DataGraph, e: NodeExpr) -> frozenset[int]:
    """The set of nodes the node expression denotes over g."""
    return _Evaluator(g).sat(e)


def satisfies_global(g: DataGraph, e: Expr) -> bool:
    """Node expressions must hold at every node, path expressions at every
    ordered pair of nodes. Empty graphs satisfy vacuously."""
    ev = _Evaluator(g)
    if isinstance(e, NodeExpr):
        return ev.sat(e) == g.nodes
    return ev.rel(e) == ev.all_pairs


def satisfies_somewhere(g: DataGraph, e: Expr) -> bool:
    """True iff the denotation is non-empty (at least one node / pair)."""
    ev = _Evaluator(g)
    if isinstance(e, NodeExpr):
        return bool(ev.sat(e))
    return bool(ev.rel(e))


def satisfies_at(g: DataGraph, origin: int, e: NodeExpr) -> bool:
    if origin not in g.nodes:
        raise ValueError(f"origin {origin} is not a node of the graph")
    return origin in eval_node(g, e)


def satisfies_pair(g: DataGraph, source: int, target: int, p: PathExpr) -> bool:
    if source not in g.nodes or target not in g.nodes:
        raise ValueError(f"pair ({source}, {target}) is not within the graph's nodes")
    return (source, target) in eval_path(g, p)
