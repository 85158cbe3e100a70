"""Executable hardness constructions, used as end-to-end test fixtures.

Each builder encodes a Boolean formula (or a digraph) as a cleaning or
query-answering instance whose answer equals satisfiability, majority
satisfiability, or Hamiltonian-path existence. The priors are intensional
with bespoke conditional enumerators over assignment-encoding graphs; blind
cosupport enumeration would be astronomically larger.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

from .datagraph import DataGraph
from .emdg import (
    Budget,
    IntensionalPrior,
    ModelClass,
    Pudg,
    RealizationModel,
    indicator_model,
    uniform_subset_model,
    uniform_superset_model,
)
from .gxpath import ast
from .gxpath.ast import NodeExpr

VAR, CLAUSE, TRUE, FALSE = "var", "clause", "true", "false"


@dataclass(frozen=True)
class Cnf:
    """A CNF formula as tuples of signed DIMACS-style literals."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def is_three_cnf(self) -> bool:
        return all(len(c) == 3 for c in self.clauses)

    def has_complementary_literals(self) -> bool:
        """Whether some clause contains a variable both plain and negated."""
        return any(
            any(-lit in clause for lit in clause) for clause in self.clauses
        )

    @classmethod
    def of(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> Cnf:
        return cls(num_vars, tuple(tuple(c) for c in clauses))


def parse_dimacs(text: str) -> Cnf:
    num_vars = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    return Cnf(num_vars, tuple(clauses))


def to_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def _require_three_cnf(cnf: Cnf) -> None:
    if cnf.num_vars < 1 or cnf.num_clauses < 1:
        raise ValueError("need at least one variable and one clause")
    if not cnf.is_three_cnf:
        raise ValueError("this construction needs exactly three literals per clause")


def _assignment_satisfies(cnf: Cnf, assignment: dict[int, bool]) -> bool:
    return all(
        any(assignment[abs(lit)] == (lit > 0) for lit in clause)
        for clause in cnf.clauses
    )


def _all_assignments(num_vars: int):
    for bits in product([False, True], repeat=num_vars):
        yield dict(zip(range(1, num_vars + 1), bits))


# -- probability mass bookkeeping for the formula-family priors ----------------


def family_mass(n: int, m: int) -> Fraction:
    """Mass reserved for the (n variables, m clauses) family: walking the
    anti-diagonals assigns consecutive powers of 1/2, so the total over all
    families telescopes to 1."""
    d = n + m
    return Fraction(1, 2 ** (1 + d * (d + 1) // 2 + m))


def assignment_family_count(n: int, m: int) -> int:
    """How many encoded (formula, assignment, tag) graphs the (n, m) family
    holds when clauses draw three distinct variables: assignments times
    clause structures times the two tag labels."""
    return 2 * 2**n * (8 * comb(n, 3)) ** m


def _family_share(n: int, m: int) -> Fraction:
    # The per-graph constant cancels in every posterior; families too small
    # for three distinct variables per clause just reuse the family mass.
    count = assignment_family_count(n, m)
    return family_mass(n, m) / count if count else family_mass(n, m)


# -- SAT via cleaning -----------------------------------------------------------


def _formula_nodes(cnf: Cnf) -> tuple[dict[int, str], int, int]:
    n, m = cnf.num_vars, cnf.num_clauses
    data = {i: VAR for i in range(1, n + 1)}
    data.update({n + j: CLAUSE for j in range(1, m + 1)})
    false_node, true_node = n + m + 1, n + m + 2
    data[false_node] = FALSE
    data[true_node] = TRUE
    return data, false_node, true_node


def _literal_edges(cnf: Cnf, pos_label: str, neg_label: str) -> set[tuple[int, str, int]]:
    n = cnf.num_vars
    edges: set[tuple[int, str, int]] = set()
    for j, clause in enumerate(cnf.clauses, start=1):
        for lit in clause:
            label = pos_label if lit > 0 else neg_label
            edges.add((abs(lit), label, n + j))
    return edges


def _family_prior(
    cnf: Cnf, graph_of: dict[DataGraph, Fraction], description: str
) -> IntensionalPrior:
    def weight(g: DataGraph) -> Fraction:
        return graph_of.get(g, Fraction(0))

    def enumerate_support(observed, model, budget):
        return list(graph_of)

    return IntensionalPrior(weight, enumerate_support, description=description)


def gadget_sat_subset(cnf: Cnf) -> tuple[Pudg, Fraction]:
    """Formula-with-assignment graphs observed through a uniform
    edge-dropping observer that erased the assignment; a clean graph clears
    the returned posterior bound iff the formula is satisfiable.

    Satisfying assignments carry twice the prior mass of falsified ones via
    a paired tag edge, so the posterior of a satisfying world is exactly
    1/2^n against the bound 1/2^(n+1)."""
    _require_three_cnf(cnf)
    n, m = cnf.num_vars, cnf.num_clauses
    data, false_node, true_node = _formula_nodes(cnf)
    alphabet = ["is_literal", "is_literal_negated", "value", "e1", "e2"]
    base_edges = _literal_edges(cnf, "is_literal", "is_literal_negated")
    observed = DataGraph(data.keys(), data, base_edges, alphabet)

    share = _family_share(n, m)
    table: dict[DataGraph, Fraction] = {}
    for assignment in _all_assignments(n):
        value_edges = {
            (i, "value", true_node if assignment[i] else false_node)
            for i in range(1, n + 1)
        }
        sat = _assignment_satisfies(cnf, assignment)
        for tag, mass in (("e1", 1 + sat), ("e2", 1 - sat)):
            g = observed.add_edges(value_edges | {(false_node, tag, true_node)})
            if mass:
                table[g] = share * mass

    prior = _family_prior(cnf, table, "sat_subset_family")
    pudg = Pudg(prior, uniform_subset_model(), observed, Budget())
    return pudg, Fraction(1, 2 ** (n + 1))


def gadget_sat_superset(cnf: Cnf) -> tuple[Pudg, Fraction]:
    """Dual of the subset gadget: the observer adds every assignment edge,
    so the observation carries both value edges per variable and both tag
    edges; the same prior and bound 1/2^(n+1) separate SAT from UNSAT."""
    _require_three_cnf(cnf)
    n, m = cnf.num_vars, cnf.num_clauses
    data, false_node, true_node = _formula_nodes(cnf)
    alphabet = ["is_literal", "is_literal_negated", "value", "e1", "e2"]
    base_edges = _literal_edges(cnf, "is_literal", "is_literal_negated")

    all_value_edges = {
        (i, "value", target)
        for i in range(1, n + 1)
        for target in (true_node, false_node)
    }
    both_tags = {(false_node, "e1", true_node), (false_node, "e2", true_node)}
    observed = DataGraph(
        data.keys(), data, base_edges | all_value_edges | both_tags, alphabet
    )

    share = _family_share(n, m)
    table: dict[DataGraph, Fraction] = {}
    skeleton = DataGraph(data.keys(), data, base_edges, alphabet)
    for assignment in _all_assignments(n):
        value_edges = {
            (i, "value", true_node if assignment[i] else false_node)
            for i in range(1, n + 1)
        }
        sat = _assignment_satisfies(cnf, assignment)
        for tag, mass in (("e1", 1 + sat), ("e2", 1 - sat)):
            g = skeleton.add_edges(value_edges | {(false_node, tag, true_node)})
            if mass:
                table[g] = share * mass

    prior = _family_prior(cnf, table, "sat_superset_family")
    pudg = Pudg(prior, uniform_superset_model(), observed, Budget())
    return pudg, Fraction(1, 2 ** (n + 1))


def _label_rewrite_model() -> RealizationModel:
    """Uniformly rewrite any subset of the non-"unchosen" edge labels to
    "unchosen", leaving nodes, data and edge shape alone."""

    def weight(clean: DataGraph, observed: DataGraph) -> Fraction:
        if clean.nodes != observed.nodes or dict(clean.data) != dict(observed.data):
            return Fraction(0)
        if clean.edge_alphabet != observed.edge_alphabet:
            return Fraction(0)
        flippable = 0
        pairs = {(s, t) for (s, _, t) in clean.edges} | {
            (s, t) for (s, _, t) in observed.edges
        }
        for s, t in pairs:
            clean_labels = sorted(clean.labels_between(s, t))
            observed_labels = sorted(observed.labels_between(s, t))
            if len(clean_labels) != len(observed_labels):
                return Fraction(0)
            spare = observed_labels.count("unchosen") - clean_labels.count("unchosen")
            if spare < 0:
                return Fraction(0)
            for label in set(clean_labels) | set(observed_labels):
                if label == "unchosen":
                    continue
                drop = clean_labels.count(label) - observed_labels.count(label)
                if drop < 0:
                    return Fraction(0)
                spare -= drop
            if spare != 0:
                return Fraction(0)
            flippable += sum(1 for l in clean_labels if l != "unchosen")
        return Fraction(1, 2**flippable)

    return RealizationModel(ModelClass.UPDATE, weight, description="label_rewrite")


def gadget_sat_update(cnf: Cnf) -> tuple[Pudg, Fraction]:
    """Assignments encoded as chosen/unchosen edge labels, observed through
    an observer that may rewrite labels to "unchosen"; bound 1/2^n.

    Clauses holding a variable both plain and negated are rejected: a
    formula satisfied by every assignment would sit exactly at the bound,
    and with three literals per clause that needs a complementary pair.
    """
    _require_three_cnf(cnf)
    if cnf.has_complementary_literals():
        raise ValueError(
            "clauses with complementary literals make this construction degenerate"
        )
    n, m = cnf.num_vars, cnf.num_clauses
    data, false_node, true_node = _formula_nodes(cnf)
    alphabet = ["is_literal", "is_literal_negated", "chosen", "unchosen", "e1", "e2"]
    base_edges = _literal_edges(cnf, "is_literal", "is_literal_negated")

    unchosen_everything = {
        (i, "unchosen", target)
        for i in range(1, n + 1)
        for target in (true_node, false_node)
    }
    observed = DataGraph(
        data.keys(),
        data,
        base_edges | unchosen_everything | {(false_node, "e1", true_node)},
        alphabet,
    )

    share = _family_share(n, m)
    skeleton = DataGraph(data.keys(), data, base_edges, alphabet)
    table: dict[DataGraph, Fraction] = {}
    for assignment in _all_assignments(n):
        choice_edges = set()
        for i in range(1, n + 1):
            picked = true_node if assignment[i] else false_node
            spurned = false_node if assignment[i] else true_node
            choice_edges.add((i, "chosen", picked))
            choice_edges.add((i, "unchosen", spurned))
        sat = _assignment_satisfies(cnf, assignment)
        for tag, mass in (("e1", 1 + sat), ("e2", 1 - sat)):
            g = skeleton.add_edges(choice_edges | {(false_node, tag, true_node)})
            if mass:
                table[g] = share * mass

    prior = _family_prior(cnf, table, "sat_update_family")
    pudg = Pudg(prior, _label_rewrite_model(), observed, Budget())
    return pudg, Fraction(1, 2**n)


# -- SAT via isomorphic repair ---------------------------------------------------


def gadget_isorepair(cnf: Cnf) -> tuple[DataGraph, NodeExpr]:
    """A graph and a fixed positive condition such that some relabeling of
    the graph's data values satisfies the condition everywhere iff the
    formula is satisfiable.

    Clause nodes are pinned to their value by self-loop-or-clause
    disjunction; variable nodes act as the assignment."""
    n = cnf.num_vars
    nodes = {i: VAR for i in range(1, n + 1)}
    nodes.update({n + j: CLAUSE for j in range(1, cnf.num_clauses + 1)})
    edges = _literal_edges(cnf, "pos", "neg")
    edges |= {(i, "not_clause", i) for i in range(1, n + 1)}
    graph = DataGraph(nodes.keys(), nodes, edges, ["pos", "neg", "not_clause"])

    clause_ok = ast.or_of(
        [
            ast.Exists(ast.Concat(ast.InverseLabel("pos"), ast.Test(ast.DataEq(TRUE)))),
            ast.Exists(ast.Concat(ast.InverseLabel("neg"), ast.Test(ast.DataEq(FALSE)))),
            ast.DataNeq(CLAUSE),
        ]
    )
    clause_pinned = ast.Or(ast.Exists(ast.Label("not_clause")), ast.DataEq(CLAUSE))
    return graph, ast.And(clause_ok, clause_pinned)


# -- Hamiltonian path via origin repair -------------------------------------------


def gadget_hampath(
    num_nodes: int, arcs: Iterable[tuple[int, int]], start: int
) -> tuple[DataGraph, int, NodeExpr]:
    """A data-graph plus an origin-evaluated chain condition whose repair
    exists iff the digraph has a Hamiltonian path from `start`.

    The condition asks for a walk stamped 1, 2, ..., n; since the stamps
    are pairwise distinct data values, the walk must visit n distinct
    nodes."""
    if not 0 <= start < num_nodes:
        raise ValueError("start must be one of the digraph's nodes")
    nodes = range(num_nodes)
    graph = DataGraph(
        nodes,
        {v: "0" for v in nodes},
        [(a, "arc", b) for (a, b) in arcs],
        ["arc"],
    )
    parts: list[ast.PathExpr] = [ast.Test(ast.DataEq("1"))]
    for step in range(2, num_nodes + 1):
        parts.append(ast.Label("arc"))
        parts.append(ast.Test(ast.DataEq(str(step))))
    return graph, start, ast.Exists(ast.concat_of(parts))


# -- majority SAT via probabilistic query answering --------------------------------


@dataclass(frozen=True)
class MajsatGadget:
    pudg: Pudg
    query: NodeExpr
    positive_query: NodeExpr
    bound: Fraction


def _majsat_query() -> tuple[NodeExpr, NodeExpr]:
    pos_branch = ast.Exists(
        ast.concat_of(
            [ast.InverseLabel("pos"), ast.Label("assigned"), ast.Test(ast.DataEq(TRUE))]
        )
    )
    neg_branch = ast.Exists(
        ast.concat_of(
            [ast.InverseLabel("neg"), ast.Label("assigned"), ast.Test(ast.DataEq(FALSE))]
        )
    )
    query = ast.or_of([pos_branch, neg_branch, ast.Not(ast.DataEq(CLAUSE))])
    positive = ast.or_of(
        [ast.DataEq(VAR), ast.DataEq(TRUE), ast.DataEq(FALSE), pos_branch, neg_branch]
    )
    return query, positive


def _majsat_worlds(cnf: Cnf, skeleton: DataGraph, false_node: int, true_node: int):
    for assignment in _all_assignments(cnf.num_vars):
        yield skeleton.add_edges(
            (i, "assigned", true_node if assignment[i] else false_node)
            for i in range(1, cnf.num_vars + 1)
        )


def gadget_majsat_subset(cnf: Cnf) -> MajsatGadget:
    """Uniform assignment worlds observed with their assignment erased; the
    probability that the clause-check query holds everywhere exceeds 1/2
    iff a majority of assignments satisfies the formula."""
    n = cnf.num_vars
    data, false_node, true_node = _formula_nodes(cnf)
    alphabet = ["pos", "neg", "assigned"]
    observed = DataGraph(data.keys(), data, _literal_edges(cnf, "pos", "neg"), alphabet)

    share = Fraction(1, 2**n)
    table = {g: share for g in _majsat_worlds(cnf, observed, false_node, true_node)}
    prior = _family_prior(cnf, table, "majsat_subset_family")
    pudg = Pudg(prior, indicator_model(ModelClass.SUBSET), observed, Budget())
    query, positive = _majsat_query()
    return MajsatGadget(pudg, query, positive, Fraction(1, 2))


def gadget_majsat_superset(cnf: Cnf) -> MajsatGadget:
    """Mirror construction: the observation carries every assignment edge
    and worlds are the subgraphs keeping one choice per variable."""
    n = cnf.num_vars
    data, false_node, true_node = _formula_nodes(cnf)
    alphabet = ["pos", "neg", "assigned"]
    skeleton = DataGraph(data.keys(), data, _literal_edges(cnf, "pos", "neg"), alphabet)
    observed = skeleton.add_edges(
        (i, "assigned", target)
        for i in range(1, n + 1)
        for target in (true_node, false_node)
    )

    share = Fraction(1, 2**n)
    table = {g: share for g in _majsat_worlds(cnf, skeleton, false_node, true_node)}
    prior = _family_prior(cnf, table, "majsat_superset_family")
    pudg = Pudg(prior, indicator_model(ModelClass.SUPERSET), observed, Budget())
    query, positive = _majsat_query()
    return MajsatGadget(pudg, query, positive, Fraction(1, 2))
