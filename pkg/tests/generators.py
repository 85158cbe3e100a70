"""Random instance generators shared by the property tests."""

from __future__ import annotations

import random

from pudg.datagraph import DataGraph
from pudg.gxpath import ast

LABELS = ("a", "b", "c")
VALUES = ("x", "y", "z", "w")


def random_graph(
    rng: random.Random,
    max_nodes: int = 6,
    labels=LABELS,
    values=VALUES,
    edge_prob: float = 0.25,
    min_nodes: int = 0,
    sparse_ids: bool = False,
) -> DataGraph:
    n = rng.randint(min_nodes, max_nodes)
    if sparse_ids:
        nodes = sorted(rng.sample(range(3 * max_nodes + 1), n))
    else:
        nodes = list(range(n))
    data = {v: rng.choice(values) for v in nodes}
    edges = [
        (u, l, w)
        for u in nodes
        for l in labels
        for w in nodes
        if rng.random() < edge_prob
    ]
    return DataGraph(nodes, data, edges, labels)


def random_sub_data_graph(rng: random.Random, g: DataGraph) -> DataGraph:
    """A random sub-data-graph: subset of nodes, subset of induced edges."""
    keep = [v for v in g.nodes if rng.random() < 0.8]
    induced = g.induced(keep)
    edges = [e for e in induced.edges if rng.random() < 0.8]
    return induced.with_edges(edges)


class ExprProfile:
    """Which constructors a random expression may use."""

    def __init__(self, *, negation=False, wildcard=True, star="any", path_cmp=True):
        assert star in ("any", "atomic", "none")
        self.negation = negation
        self.wildcard = wildcard
        self.star = star
        self.path_cmp = path_cmp


REG = ExprProfile(negation=True)
POS = ExprProfile()
POS_STAR_FREE = ExprProfile(star="none")
CORE = ExprProfile(wildcard=False, star="atomic")
CORE_STAR_FREE = ExprProfile(wildcard=False, star="none")


def random_path(rng, depth, labels=LABELS, values=VALUES, profile=POS) -> ast.PathExpr:
    atoms = ["eps", "label", "inverse"]
    if profile.wildcard:
        atoms.append("wild")
    if depth <= 0:
        kind = rng.choice(atoms)
    else:
        kinds = atoms + ["test", "concat", "concat", "union", "union", "inter", "repeat"]
        if profile.star in ("any", "atomic"):
            kinds.append("star")
        if profile.negation:
            kinds.append("compl")
        kind = rng.choice(kinds)

    if kind == "eps":
        return ast.Epsilon()
    if kind == "wild":
        return ast.Wildcard()
    if kind == "label":
        return ast.Label(rng.choice(labels))
    if kind == "inverse":
        return ast.InverseLabel(rng.choice(labels))
    if kind == "test":
        return ast.Test(random_node(rng, depth - 1, labels, values, profile))
    if kind == "concat":
        return ast.Concat(
            random_path(rng, depth - 1, labels, values, profile),
            random_path(rng, depth - 1, labels, values, profile),
        )
    if kind == "union":
        return ast.Union(
            random_path(rng, depth - 1, labels, values, profile),
            random_path(rng, depth - 1, labels, values, profile),
        )
    if kind == "inter":
        return ast.Intersect(
            random_path(rng, depth - 1, labels, values, profile),
            random_path(rng, depth - 1, labels, values, profile),
        )
    if kind == "repeat":
        lo = rng.randint(0, 2)
        hi = rng.randint(lo, 3)
        return ast.Repeat(random_path(rng, depth - 1, labels, values, profile), lo, hi)
    if kind == "star":
        if profile.star == "atomic":
            atom = rng.choice(
                [ast.Label(rng.choice(labels)), ast.InverseLabel(rng.choice(labels))]
            )
            return ast.Star(atom)
        return ast.Star(random_path(rng, depth - 1, labels, values, profile))
    if kind == "compl":
        return ast.Complement(random_path(rng, depth - 1, labels, values, profile))
    raise AssertionError(kind)


def random_node(rng, depth, labels=LABELS, values=VALUES, profile=POS) -> ast.NodeExpr:
    if depth <= 0:
        kind = rng.choice(["eq", "neq"])
    else:
        kinds = ["eq", "neq", "exists", "exists", "and", "or"]
        if profile.path_cmp:
            kinds += ["patheq", "pathneq"]
        if profile.negation:
            kinds.append("not")
        kind = rng.choice(kinds)

    if kind == "eq":
        return ast.DataEq(rng.choice(values))
    if kind == "neq":
        return ast.DataNeq(rng.choice(values))
    if kind == "exists":
        return ast.Exists(random_path(rng, depth - 1, labels, values, profile))
    if kind == "and":
        return ast.And(
            random_node(rng, depth - 1, labels, values, profile),
            random_node(rng, depth - 1, labels, values, profile),
        )
    if kind == "or":
        return ast.Or(
            random_node(rng, depth - 1, labels, values, profile),
            random_node(rng, depth - 1, labels, values, profile),
        )
    if kind == "patheq":
        return ast.PathEq(
            random_path(rng, depth - 1, labels, values, profile),
            random_path(rng, depth - 1, labels, values, profile),
        )
    if kind == "pathneq":
        return ast.PathNeq(
            random_path(rng, depth - 1, labels, values, profile),
            random_path(rng, depth - 1, labels, values, profile),
        )
    if kind == "not":
        return ast.Not(random_node(rng, depth - 1, labels, values, profile))
    raise AssertionError(kind)


def random_expr(rng, depth, labels=LABELS, values=VALUES, profile=POS) -> ast.Expr:
    if rng.random() < 0.5:
        return random_path(rng, depth, labels, values, profile)
    return random_node(rng, depth, labels, values, profile)
