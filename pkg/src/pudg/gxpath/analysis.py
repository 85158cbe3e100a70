"""Static analysis of expressions: fragments, mentioned symbols, certificate bound."""

from __future__ import annotations

import enum
from collections.abc import Iterator

from ..errors import FragmentError
from . import ast
from .ast import Expr, NodeExpr, PathExpr


class Fragment(enum.Enum):
    """Nested grammar fragments, most permissive first.

    REG is the full language. POS_REG drops complement and negation and is
    monotone under graph extension. POS_CORE_REG further drops the wildcard
    and allows the Kleene star only on labels and inverse labels, so starred
    subexpressions never interact with data values. POS_CORE_REG_STAR_FREE
    bans the star entirely (bounded repetition stays available).
    """

    REG = "reg"
    POS_REG = "pos_reg"
    POS_CORE_REG = "pos_core_reg"
    POS_CORE_REG_STAR_FREE = "pos_core_reg_star_free"


def subexpressions(e: Expr) -> Iterator[Expr]:
    """Depth-first pre-order walk over the whole mutually recursive AST."""
    yield e
    if isinstance(e, (ast.Concat, ast.Union, ast.Intersect, ast.And, ast.Or, ast.PathEq, ast.PathNeq)):
        yield from subexpressions(e.left)
        yield from subexpressions(e.right)
    elif isinstance(e, (ast.Star, ast.Complement, ast.Repeat, ast.Not)):
        yield from subexpressions(e.inner)
    elif isinstance(e, ast.Test):
        yield from subexpressions(e.cond)
    elif isinstance(e, ast.Exists):
        yield from subexpressions(e.path)


def mentioned_data_values(e: Expr) -> frozenset[str]:
    """Data constants appearing in equality or inequality tests."""
    return frozenset(
        sub.value for sub in subexpressions(e) if isinstance(sub, (ast.DataEq, ast.DataNeq))
    )


def mentioned_labels(e: Expr) -> frozenset[str]:
    return frozenset(
        sub.name for sub in subexpressions(e) if isinstance(sub, (ast.Label, ast.InverseLabel))
    )


def uses_negation(e: Expr) -> bool:
    return any(isinstance(sub, (ast.Complement, ast.Not)) for sub in subexpressions(e))


def uses_wildcard(e: Expr) -> bool:
    return any(isinstance(sub, ast.Wildcard) for sub in subexpressions(e))


def uses_star(e: Expr) -> bool:
    return any(isinstance(sub, ast.Star) for sub in subexpressions(e))


def uses_path_inequality(e: Expr) -> bool:
    return any(isinstance(sub, ast.PathNeq) for sub in subexpressions(e))


def uses_path_equality(e: Expr) -> bool:
    return any(isinstance(sub, ast.PathEq) for sub in subexpressions(e))


def stars_are_atomic(e: Expr) -> bool:
    """True iff every Kleene star is applied to a label or an inverse label."""
    return all(
        isinstance(sub.inner, (ast.Label, ast.InverseLabel))
        for sub in subexpressions(e)
        if isinstance(sub, ast.Star)
    )


def fragment_of(e: Expr) -> Fragment:
    """The most restrictive fragment that contains the expression."""
    if uses_negation(e):
        return Fragment.REG
    if uses_wildcard(e) or not stars_are_atomic(e):
        return Fragment.POS_REG
    if uses_star(e):
        return Fragment.POS_CORE_REG
    return Fragment.POS_CORE_REG_STAR_FREE


def is_positive(e: Expr) -> bool:
    return not uses_negation(e)


# -- certificate size bound ---------------------------------------------------


def certificate_bound(e: Expr) -> int:
    """An upper bound on how many nodes a witness needs.

    For a star-free positive expression, any satisfaction (of a node
    expression at a node, or a path expression at a pair) survives
    restriction to some induced sub-data-graph of at most this many nodes;
    positive monotonicity then lifts the witness back to the full graph.
    Union and disjunction take the max of their branches: the surviving
    witness may come from either side, so only max is a sound combination.
    """
    if isinstance(e, PathExpr):
        return _path_bound(e)
    return _node_bound(e)


def _reject(e: Expr) -> int:
    if isinstance(e, ast.Star):
        raise FragmentError("certificate bound requires a star-free expression")
    raise FragmentError("certificate bound requires the positive fragment")


def _path_bound(p: PathExpr) -> int:
    if isinstance(p, ast.Epsilon):
        return 1
    if isinstance(p, (ast.Label, ast.InverseLabel, ast.Wildcard)):
        return 2
    if isinstance(p, ast.Test):
        return _node_bound(p.cond)
    if isinstance(p, (ast.Concat, ast.Intersect)):
        return _path_bound(p.left) + _path_bound(p.right) - 1
    if isinstance(p, ast.Union):
        return max(_path_bound(p.left), _path_bound(p.right))
    if isinstance(p, ast.Repeat):
        return max(1, p.hi * _path_bound(p.inner))
    return _reject(p)


def _node_bound(e: NodeExpr) -> int:
    if isinstance(e, (ast.DataEq, ast.DataNeq)):
        return 1
    if isinstance(e, ast.Exists):
        return _path_bound(e.path)
    if isinstance(e, ast.And):
        return _node_bound(e.left) + _node_bound(e.right) - 1
    if isinstance(e, ast.Or):
        return max(_node_bound(e.left), _node_bound(e.right))
    if isinstance(e, (ast.PathEq, ast.PathNeq)):
        return _path_bound(e.left) + _path_bound(e.right) - 1
    return _reject(e)
