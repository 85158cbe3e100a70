"""Graph+expression rewrites that trade one evaluation mode for another.

Each transform returns a new graph and a new expression whose satisfaction
is equivalent to the input's:

- eliminate_star: materializes reflexive-transitive closures of starred
  labels as fresh edge labels, leaving a star-free expression.
- globally-evaluated node expression <-> origin-evaluated node expression.
- globally-evaluated path expression <-> pair-evaluated (bi-pointed) path.

Inside every transform the wildcard is expanded to the finite union of the
input graph's labels, so it cannot match the scaffolding edges added here.
"""

from __future__ import annotations

from collections.abc import Callable

from ..datagraph import DataGraph, fresh_node_id, fresh_symbols
from ..errors import FragmentError, NonCoreStarError
from . import ast
from .analysis import is_positive, mentioned_data_values, subexpressions
from .ast import Expr, NodeExpr, PathExpr
from .evaluator import eval_path, reflexive_transitive_closure


def _transform(e: Expr, replace: Callable[[Expr], Expr | None]) -> Expr:
    """Top-down rewrite: `replace` may substitute a whole subtree."""
    out = replace(e)
    if out is not None:
        return out
    rec = lambda sub: _transform(sub, replace)
    if isinstance(e, ast.Concat):
        return ast.Concat(rec(e.left), rec(e.right))
    if isinstance(e, ast.Union):
        return ast.Union(rec(e.left), rec(e.right))
    if isinstance(e, ast.Intersect):
        return ast.Intersect(rec(e.left), rec(e.right))
    if isinstance(e, ast.Star):
        return ast.Star(rec(e.inner))
    if isinstance(e, ast.Complement):
        return ast.Complement(rec(e.inner))
    if isinstance(e, ast.Repeat):
        return ast.Repeat(rec(e.inner), e.lo, e.hi)
    if isinstance(e, ast.Test):
        return ast.Test(rec(e.cond))
    if isinstance(e, ast.Not):
        return ast.Not(rec(e.inner))
    if isinstance(e, ast.And):
        return ast.And(rec(e.left), rec(e.right))
    if isinstance(e, ast.Or):
        return ast.Or(rec(e.left), rec(e.right))
    if isinstance(e, ast.Exists):
        return ast.Exists(rec(e.path))
    if isinstance(e, ast.PathEq):
        return ast.PathEq(rec(e.left), rec(e.right))
    if isinstance(e, ast.PathNeq):
        return ast.PathNeq(rec(e.left), rec(e.right))
    return e  # atoms


def expand_wildcards(e: Expr, labels: frozenset[str]) -> Expr:
    """Replace `_` by the union of the given labels (or by an unsatisfiable
    test if there are none), pinning its meaning to the original alphabet."""
    if not any(isinstance(sub, ast.Wildcard) for sub in subexpressions(e)):
        return e
    if labels:
        expansion: PathExpr = ast.union_of([ast.Label(l) for l in sorted(labels)])
    else:
        expansion = ast.never()
    return _transform(e, lambda sub: expansion if isinstance(sub, ast.Wildcard) else None)


def _require_positive(e: Expr, what: str) -> None:
    if not is_positive(e):
        raise FragmentError(f"{what} requires an expression without complement or negation")


# -- star elimination ---------------------------------------------------------


def eliminate_star(g: DataGraph, e: Expr) -> tuple[DataGraph, Expr]:
    """Rewrite every starred atom to a fresh label whose edges are the
    reflexive-transitive closure of that atom's relation.

    Star-free inputs come back unchanged. Stars over anything but a label
    or inverse label are rejected: their closures could depend on data
    values, which this rewrite cannot capture.
    """
    starred: list[ast.Star] = []
    for sub in subexpressions(e):
        if isinstance(sub, ast.Star):
            if not isinstance(sub.inner, (ast.Label, ast.InverseLabel)):
                raise NonCoreStarError(
                    f"cannot eliminate a star over non-atomic path {sub.inner!r}"
                )
            if sub not in starred:
                starred.append(sub)
    if not starred:
        return g, e

    taken = set(g.edge_alphabet)
    replacement: dict[ast.Star, PathExpr] = {}
    new_edges: list[tuple[int, str, int]] = []
    new_labels: list[str] = []
    for star in starred:
        atom = star.inner
        stem = f"{atom.name}*" if isinstance(atom, ast.Label) else f"{atom.name}^-*"
        (name,) = fresh_symbols(taken, 1, stem)
        taken.add(name)
        new_labels.append(name)
        closure = reflexive_transitive_closure(eval_path(g, atom), g.nodes)
        new_edges.extend((a, name, b) for (a, b) in closure)
        replacement[star] = ast.Label(name)

    out_graph = g.add_edges(new_edges, new_labels)
    rewritten = _transform(
        expand_wildcards(e, g.edge_alphabet),
        lambda sub: replacement.get(sub) if isinstance(sub, ast.Star) else None,
    )
    return out_graph, rewritten


# -- global <-> origin for node expressions -----------------------------------


def to_origin(g: DataGraph, cond: NodeExpr) -> tuple[DataGraph, int, NodeExpr]:
    """Turn "cond holds at every node of g" into "cond' holds at a single
    origin of g'".

    A fresh hub node gets a loop on a fresh label, a fresh step label
    threads hub -> n1 -> ... -> nk -> hub, and the output walks the cycle
    testing cond at each stop. Only positive expressions are accepted: the
    rewrite relies on the scaffolding being invisible to them.
    """
    _require_positive(cond, "the origin transform")
    hub = fresh_node_id(g)
    (step,) = fresh_symbols(g.edge_alphabet, 1, "step")
    (loop,) = fresh_symbols(set(g.edge_alphabet) | {step}, 1, "loop")
    (hub_value,) = fresh_symbols(
        set(g.data.values()) | mentioned_data_values(cond), 1, "hub"
    )

    ordered = sorted(g.nodes)
    cycle = [hub] + ordered + [hub]
    edges = set(g.edges)
    edges.add((hub, loop, hub))
    edges.update((cycle[i], step, cycle[i + 1]) for i in range(len(cycle) - 1))

    out_graph = DataGraph(
        set(g.nodes) | {hub},
        {**dict(g.data), hub: hub_value},
        edges,
        set(g.edge_alphabet) | {step, loop},
    )
    tested = expand_wildcards(cond, g.edge_alphabet)
    walk = ast.Concat(
        ast.Star(ast.Concat(ast.Label(step), ast.Test(tested))),
        ast.Concat(ast.Label(step), ast.Label(loop)),
    )
    return out_graph, hub, ast.Exists(walk)


def to_global(g: DataGraph, origin: int, cond: NodeExpr) -> tuple[DataGraph, NodeExpr]:
    """Turn "cond holds at `origin` of g" into "cond' holds at every node".

    Every node except the origin gets a loop on a fresh label; the output
    lets those nodes pass trivially via the loop and leaves the origin to
    carry the original condition.
    """
    _require_positive(cond, "the global transform")
    if origin not in g.nodes:
        raise ValueError(f"origin {origin} is not a node of the graph")
    (loop,) = fresh_symbols(g.edge_alphabet, 1, "loop")
    edges = set(g.edges) | {(v, loop, v) for v in g.nodes if v != origin}
    out_graph = DataGraph(g.nodes, g.data, edges, set(g.edge_alphabet) | {loop})
    return out_graph, ast.Or(ast.Exists(ast.Label(loop)), expand_wildcards(cond, g.edge_alphabet))


# -- global <-> bi-pointed for path expressions --------------------------------


def _relativize(e: Expr, member: NodeExpr, labels: frozenset[str]) -> Expr:
    """Confine path complements to the original node set.

    `member` must hold exactly at original nodes. A raw complement taken
    over the enlarged graph would relate scaffolding nodes to everything,
    letting concatenations route through them; wrapping each complement in
    membership tests removes those spurious pairs.
    """

    def replace(sub: Expr) -> Expr | None:
        if isinstance(sub, ast.Wildcard):
            if labels:
                return ast.union_of([ast.Label(l) for l in sorted(labels)])
            return ast.never()
        if isinstance(sub, ast.Complement):
            inner = _relativize(sub.inner, member, labels)
            return ast.concat_of([ast.Test(member), ast.Complement(inner), ast.Test(member)])
        return None

    return _transform(e, replace)


def path_to_bipointed(
    g: DataGraph, p: PathExpr
) -> tuple[DataGraph, int, int, PathExpr]:
    """Turn "p holds at every pair of g" into "p' holds at (entry, exit) of g'".

    Fresh entry/exit nodes fan into and out of the original nodes on fresh
    labels; the output complements "some original pair avoids p". Original
    nodes are recognizable as the ones with an outgoing exit edge, which is
    what confines inner complements to the original graph.
    """
    entry = fresh_node_id(g)
    exit_ = entry + 1
    enter_label, exit_label = fresh_symbols(g.edge_alphabet, 2, "pick")
    (pad_value,) = fresh_symbols(
        set(g.data.values()) | mentioned_data_values(p), 1, "pad"
    )

    edges = set(g.edges)
    edges.update((entry, enter_label, v) for v in g.nodes)
    edges.update((v, exit_label, exit_) for v in g.nodes)
    out_graph = DataGraph(
        set(g.nodes) | {entry, exit_},
        {**dict(g.data), entry: pad_value, exit_: pad_value},
        edges,
        set(g.edge_alphabet) | {enter_label, exit_label},
    )

    member = ast.Exists(ast.Label(exit_label))
    confined = _relativize(p, member, g.edge_alphabet)
    out_expr = ast.Complement(
        ast.concat_of([ast.Label(enter_label), ast.Complement(confined), ast.Label(exit_label)])
    )
    return out_graph, entry, exit_, out_expr


def path_to_global(
    g: DataGraph, source: int, target: int, p: PathExpr
) -> tuple[DataGraph, PathExpr]:
    """Turn "p holds at the pair (source, target) of g" into "p' holds at
    every pair of g'".

    Fresh labels send every node to `source` and `target` to every node, so
    each pair factors through the one pair that matters. No nodes are added,
    which keeps complements inside p undisturbed.
    """
    if source not in g.nodes or target not in g.nodes:
        raise ValueError("source and target must be nodes of the graph")
    enter_label, exit_label = fresh_symbols(g.edge_alphabet, 2, "pick")
    edges = set(g.edges)
    edges.update((v, enter_label, source) for v in g.nodes)
    edges.update((target, exit_label, v) for v in g.nodes)
    out_graph = DataGraph(g.nodes, g.data, edges, set(g.edge_alphabet) | {enter_label, exit_label})
    out_expr = ast.concat_of(
        [ast.Label(enter_label), expand_wildcards(p, g.edge_alphabet), ast.Label(exit_label)]
    )
    return out_graph, out_expr
