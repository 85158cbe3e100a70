"""Soft and hard constraints as prior reweighting.

A constraint is an expression with a weight in [0, 1): graphs satisfying it
keep only that share of their prior mass (weight 0 excludes them outright);
graphs violating it are untouched. Normalization is deferred to whoever
consumes the prior, so reweighting composes with the Bayesian machinery
without extra passes.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .datagraph import DataGraph
from .emdg import Prior
from .gxpath.ast import Expr, NodeExpr
from .gxpath.evaluator import satisfies_at, satisfies_global


@dataclass(frozen=True)
class Constraint:
    query: Expr
    weight: Fraction
    semantics: str = "global"  # or "origin"
    origin: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        if not 0 <= self.weight < 1:
            raise ValueError("constraint weights live in [0, 1)")
        if self.semantics not in ("global", "origin"):
            raise ValueError(f"unknown semantics {self.semantics!r}")
        if self.semantics == "origin":
            if self.origin is None:
                raise ValueError("origin semantics needs an origin node")
            if not isinstance(self.query, NodeExpr):
                raise ValueError("origin semantics applies to node expressions")

    def satisfied_by(self, g: DataGraph) -> bool:
        if self.semantics == "origin":
            return self.origin in g.nodes and satisfies_at(g, self.origin, self.query)
        return satisfies_global(g, self.query)


@dataclass(frozen=True)
class WeightedRestrictionSet:
    entries: tuple[Constraint, ...]

    @classmethod
    def of(cls, entries: Iterable[Constraint]) -> WeightedRestrictionSet:
        return cls(tuple(entries))

    def factor(self, g: DataGraph) -> Fraction:
        out = Fraction(1)
        for c in self.entries:
            out *= constraint_factor(g, c)
        return out


def constraint_factor(g: DataGraph, constraint: Constraint) -> Fraction:
    """The multiplicative penalty one constraint applies to one graph:
    its weight when the graph satisfies it, 1 otherwise."""
    return constraint.weight if constraint.satisfied_by(g) else Fraction(1)


class _ReweightedPrior(Prior):
    def __init__(self, inner: Prior, restrictions: WeightedRestrictionSet):
        self._inner = inner
        self._restrictions = restrictions

    def weight(self, g: DataGraph) -> Fraction:
        return self._inner.weight(g) * self._restrictions.factor(g)

    def support_into(self, observed, model, budget):
        base = self._inner.support_into(observed, model, budget)
        if base is None:
            return None
        return [g for g in base if self.weight(g) > 0]


def reweight_prior(prior: Prior, restrictions: WeightedRestrictionSet) -> Prior:
    """The prior with every graph's mass multiplied by its constraint
    penalties. Hard (weight-0) constraints empty out the satisfying part of
    the support; normalization happens downstream."""
    if not restrictions.entries:
        return prior
    return _ReweightedPrior(prior, restrictions)


def single_constraint_closed_form(
    g: DataGraph,
    prior_weight: Fraction,
    constraint: Constraint,
    mass_satisfying: Fraction,
) -> Fraction:
    """Normalized reweighted mass of one graph under one constraint, given
    the total prior mass of graphs satisfying the constraint.

    The normalizer splits the support into the satisfying part (scaled by
    the constraint weight) and the rest, so knowing that one probability
    mass is enough to renormalize in closed form."""
    mass_satisfying = Fraction(mass_satisfying)
    if not 0 <= mass_satisfying <= 1:
        raise ValueError("a probability mass must lie in [0, 1]")
    numerator = Fraction(prior_weight) * constraint_factor(g, constraint)
    denominator = mass_satisfying * constraint.weight + (1 - mass_satisfying)
    return numerator / denominator
