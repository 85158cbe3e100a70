"""Path and node expression ASTs with their concrete-syntax printer.

Path expressions denote sets of node pairs, node expressions sets of nodes;
the two grammars are mutually recursive. All nodes are frozen dataclasses,
so structurally equal subtrees hash equal and can key memo tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class PathExpr:
    __slots__ = ()


class NodeExpr:
    __slots__ = ()


# -- path expressions --------------------------------------------------------


@dataclass(frozen=True)
class Epsilon(PathExpr):
    """The identity relation."""


@dataclass(frozen=True)
class Wildcard(PathExpr):
    """Any single edge, whatever its label."""


@dataclass(frozen=True)
class Label(PathExpr):
    name: str


@dataclass(frozen=True)
class InverseLabel(PathExpr):
    name: str


@dataclass(frozen=True)
class Test(PathExpr):
    """Stay in place if the node condition holds: {(v, v) | v satisfies cond}."""

    cond: NodeExpr


@dataclass(frozen=True)
class Concat(PathExpr):
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class Union(PathExpr):
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class Intersect(PathExpr):
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class Star(PathExpr):
    inner: PathExpr


@dataclass(frozen=True)
class Complement(PathExpr):
    inner: PathExpr


@dataclass(frozen=True)
class Repeat(PathExpr):
    """Between lo and hi chained copies of the inner path (0 copies = identity)."""

    inner: PathExpr
    lo: int
    hi: int

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi):
            raise ValueError(f"repeat bounds must satisfy 0 <= lo <= hi, got {self.lo},{self.hi}")


# -- node expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Not(NodeExpr):
    inner: NodeExpr


@dataclass(frozen=True)
class And(NodeExpr):
    left: NodeExpr
    right: NodeExpr


@dataclass(frozen=True)
class Or(NodeExpr):
    left: NodeExpr
    right: NodeExpr


@dataclass(frozen=True)
class Exists(NodeExpr):
    """Nodes with at least one outgoing match of the path."""

    path: PathExpr


@dataclass(frozen=True)
class DataEq(NodeExpr):
    value: str


@dataclass(frozen=True)
class DataNeq(NodeExpr):
    value: str


@dataclass(frozen=True)
class PathEq(NodeExpr):
    """Nodes from which both paths can reach endpoints holding equal data."""

    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class PathNeq(NodeExpr):
    """Nodes from which the paths can reach endpoints holding different data."""

    left: PathExpr
    right: PathExpr


Expr = PathExpr | NodeExpr


# -- concrete syntax printer --------------------------------------------------
#
# Path precedence: union (+) < intersection (&) < concatenation (/)
#                  < complement (!) < postfix (*, {n,m}) < atoms.
# Node precedence: or < and < not < atoms.
# Printing parenthesizes just enough that the text re-parses to the same AST.

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED_WORDS = frozenset({"eps", "not", "and", "or"})

_P_UNION, _P_INTER, _P_CONCAT, _P_COMPL, _P_POSTFIX, _P_ATOM = range(6)
_N_OR, _N_AND, _N_NOT, _N_ATOM = range(4)


def quote_symbol(name: str) -> str:
    """Quote a label or data constant unless it is a plain identifier."""
    if _IDENT.match(name) and name not in RESERVED_WORDS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def to_text(e: Expr) -> str:
    """Concrete syntax for an expression; parse_query(to_text(e)) == e."""
    if isinstance(e, PathExpr):
        return _path_text(e, _P_UNION)
    return _node_text(e, _N_OR)


def _paren(text: str, level: int, minimum: int) -> str:
    return f"({text})" if level < minimum else text


def _path_text(p: PathExpr, minimum: int) -> str:
    if isinstance(p, Epsilon):
        return "eps"
    if isinstance(p, Wildcard):
        return "_"
    if isinstance(p, Label):
        return quote_symbol(p.name)
    if isinstance(p, InverseLabel):
        return f"{quote_symbol(p.name)}^-"
    if isinstance(p, Test):
        return f"[{_node_text(p.cond, _N_OR)}]"
    if isinstance(p, Star):
        return _paren(f"{_path_text(p.inner, _P_ATOM)}*", _P_POSTFIX, minimum)
    if isinstance(p, Repeat):
        return _paren(
            f"{_path_text(p.inner, _P_ATOM)}{{{p.lo},{p.hi}}}", _P_POSTFIX, minimum
        )
    if isinstance(p, Complement):
        return _paren(f"!{_path_text(p.inner, _P_COMPL)}", _P_COMPL, minimum)
    if isinstance(p, Concat):
        text = f"{_path_text(p.left, _P_CONCAT)} / {_path_text(p.right, _P_CONCAT + 1)}"
        return _paren(text, _P_CONCAT, minimum)
    if isinstance(p, Intersect):
        text = f"{_path_text(p.left, _P_INTER)} & {_path_text(p.right, _P_INTER + 1)}"
        return _paren(text, _P_INTER, minimum)
    if isinstance(p, Union):
        text = f"{_path_text(p.left, _P_UNION)} + {_path_text(p.right, _P_UNION + 1)}"
        return _paren(text, _P_UNION, minimum)
    raise TypeError(f"not a path expression: {p!r}")


def _node_text(e: NodeExpr, minimum: int) -> str:
    if isinstance(e, DataEq):
        return f"={quote_symbol(e.value)}"
    if isinstance(e, DataNeq):
        return f"!={quote_symbol(e.value)}"
    if isinstance(e, Exists):
        return f"<{_path_text(e.path, _P_UNION)}>"
    if isinstance(e, PathEq):
        return f"<{_path_text(e.left, _P_UNION)} = {_path_text(e.right, _P_UNION)}>"
    if isinstance(e, PathNeq):
        return f"<{_path_text(e.left, _P_UNION)} != {_path_text(e.right, _P_UNION)}>"
    if isinstance(e, Not):
        return _paren(f"not {_node_text(e.inner, _N_NOT)}", _N_NOT, minimum)
    if isinstance(e, And):
        text = f"{_node_text(e.left, _N_AND)} and {_node_text(e.right, _N_AND + 1)}"
        return _paren(text, _N_AND, minimum)
    if isinstance(e, Or):
        text = f"{_node_text(e.left, _N_OR)} or {_node_text(e.right, _N_OR + 1)}"
        return _paren(text, _N_OR, minimum)
    raise TypeError(f"not a node expression: {e!r}")


def union_of(parts: list[PathExpr]) -> PathExpr:
    """Left-nested union of paths; empty input is rejected (no empty atom)."""
    if not parts:
        raise ValueError("cannot build a union of zero paths")
    acc = parts[0]
    for p in parts[1:]:
        acc = Union(acc, p)
    return acc


def or_of(parts: list[NodeExpr]) -> NodeExpr:
    if not parts:
        raise ValueError("cannot build a disjunction of zero conditions")
    acc = parts[0]
    for e in parts[1:]:
        acc = Or(acc, e)
    return acc


def and_of(parts: list[NodeExpr]) -> NodeExpr:
    if not parts:
        raise ValueError("cannot build a conjunction of zero conditions")
    acc = parts[0]
    for e in parts[1:]:
        acc = And(acc, e)
    return acc


def concat_of(parts: list[PathExpr]) -> PathExpr:
    if not parts:
        raise ValueError("cannot build a concatenation of zero paths")
    acc = parts[0]
    for p in parts[1:]:
        acc = Concat(acc, p)
    return acc


def never() -> PathExpr:
    """A path expression with an empty denotation on every graph."""
    return Test(And(DataEq("@absurd"), DataNeq("@absurd")))
