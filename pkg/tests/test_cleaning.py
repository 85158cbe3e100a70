from fractions import Fraction

import pytest

from pudg.cleaning import (
    TransitionCost,
    clean,
    clean_bound,
    clean_cardinality,
    clean_fixed_assignment,
    clean_node_update,
    clean_subset_bounded,
    clean_superset_bounded,
    histogram_deviation,
    transition_cost_total,
)
from pudg.datagraph import DataGraph, missing_edge_slots
from pudg.emdg import (
    ExplicitPrior,
    KDataPrior,
    ModelClass,
    Pudg,
    edge_deletion_model,
    indicator_model,
    node_update_model,
    scale_prior,
)
from pudg.errors import NoCandidateError, UnsupportedModelError

from generators import random_graph
from instances import three_world_instance
from oracles import best_assignment_by_product, best_histogram_assignment


class TestCleanCore:
    def test_singleton_candidate(self):
        g = DataGraph([0], {0: "x"}, [], ["a"])
        pudg = Pudg(ExplicitPrior.uniform([g]), edge_deletion_model(Fraction(1, 2)), g)
        result = clean(pudg)
        assert result.best == g
        assert result.probability == 1

    def test_three_world_winner(self):
        pudg, w1, _, _ = three_world_instance()
        result = clean(pudg)
        assert result.best == w1
        assert result.probability == Fraction(1, 2)
        assert result.candidates_examined == 3

    def test_no_candidates(self):
        g = DataGraph([0], {0: "x"}, [], ["a"])
        other = DataGraph([1], {1: "y"}, [], ["a"])
        pudg = Pudg(ExplicitPrior.uniform([other]), edge_deletion_model(Fraction(1, 2)), g)
        with pytest.raises(NoCandidateError):
            clean(pudg)

    def test_bound_decisions(self):
        pudg, _, _, _ = three_world_instance()
        assert clean_bound(pudg, Fraction(0))
        assert clean_bound(pudg, Fraction(49, 100))
        assert not clean_bound(pudg, Fraction(1, 2))
        assert not clean_bound(pudg, Fraction(1))

    def test_bound_false_on_empty(self):
        g = DataGraph([0], {0: "x"}, [], ["a"])
        other = DataGraph([1], {1: "y"}, [], ["a"])
        pudg = Pudg(ExplicitPrior.uniform([other]), edge_deletion_model(Fraction(1, 2)), g)
        assert clean_bound(pudg, Fraction(0)) is False

    def test_argmax_invariant_under_scaling(self, rng):
        for _ in range(40):
            observed = random_graph(rng, max_nodes=4, labels=("a",))
            slots = missing_edge_slots(observed)
            worlds = [observed] + [
                observed.add_edges(slots[:k]) for k in range(1, min(3, len(slots)) + 1)
            ]
            prior = ExplicitPrior.uniform(worlds)
            model = edge_deletion_model(Fraction(1, 3))
            base = clean(Pudg(prior, model, observed))
            factor = Fraction(rng.randint(1, 7), rng.randint(1, 7))
            scaled = clean(Pudg(scale_prior(prior, factor), model, observed))
            assert scaled.best == base.best


def _subset_instance(rng, max_deletions):
    observed = random_graph(rng, max_nodes=5, labels=("a", "b"), edge_prob=0.15)
    slots = missing_edge_slots(observed)
    rng.shuffle(slots)
    worlds = [observed]
    for k in range(1, min(len(slots), max_deletions) + 1):
        worlds.append(observed.add_edges(slots[:k]))
    # A decoy outside the cosupport: shares no relation with the observation.
    decoy = DataGraph([99], {99: "zz"}, [], observed.edge_alphabet)
    weights = [Fraction(rng.randint(1, 9)) for _ in worlds] + [Fraction(30)]
    total = sum(weights)
    prior = ExplicitPrior.from_pairs(
        [(g, w / total) for g, w in zip(worlds + [decoy], weights)]
    )
    model = edge_deletion_model(Fraction(1, 3), max_deletions=max_deletions)
    return Pudg(prior, model, observed)


class TestBoundedCleaners:
    def test_subset_zero_budget_returns_observed(self, rng):
        pudg = _subset_instance(rng, max_deletions=2)
        result = clean_subset_bounded(pudg, 0)
        assert result.best == pudg.observed

    def test_subset_agrees_with_exhaustive(self, rng):
        for _ in range(60):
            k = rng.randint(0, 2)
            pudg = _subset_instance(rng, max_deletions=k)
            specialized = clean_subset_bounded(pudg, k)
            exhaustive = clean(pudg)
            assert specialized.best == exhaustive.best
            assert specialized.score == exhaustive.score

    def test_class_mismatch_rejected(self, rng):
        pudg = _subset_instance(rng, max_deletions=1)
        with pytest.raises(UnsupportedModelError):
            clean_superset_bounded(pudg, 1)

    def test_superset_zero_budget_returns_observed(self):
        g = DataGraph([0, 1], {0: "x", 1: "y"}, [(0, "a", 1)], ["a"])
        prior = ExplicitPrior.uniform([g])
        pudg = Pudg(prior, indicator_model(ModelClass.SUPERSET, max_additions=2), g)
        assert clean_superset_bounded(pudg, 0).best == g

    def test_node_update_zero_budget_returns_observed(self):
        g = DataGraph([0, 1], {0: "x", 1: "y"}, [], ["a"])
        f = KDataPrior.from_mapping({"x": ["x", "q"], "y": ["y", "q"]})
        prior = ExplicitPrior.uniform([g])
        pudg = Pudg(prior, node_update_model(f, 1), g)
        assert clean_node_update(pudg, f, 0).best == g


class TestFixedAssignment:
    def test_single_node(self):
        g = DataGraph([7], {7: "c"}, [], ["a"])
        out = clean_fixed_assignment(g, {}, lambda value, node: Fraction(1))
        assert out.data_value(7) == "c"

    def test_two_by_two_diagonal(self):
        g = DataGraph([0, 1], {0: "a", 1: "b"}, [], ["e"])
        weights = {
            ("a", 0): Fraction(9, 10),
            ("a", 1): Fraction(1, 10),
            ("b", 0): Fraction(2, 10),
            ("b", 1): Fraction(8, 10),
        }
        out = clean_fixed_assignment(g, {}, weights)
        assert out.data_value(0) == "a" and out.data_value(1) == "b"

    def test_known_assignments_pinned(self):
        g = DataGraph([0, 1, 2], {0: "a", 1: "b", 2: "c"}, [], ["e"])
        weights = {(v, n): Fraction(1, 2) for v in "abc" for n in range(3)}
        weights[("a", 0)] = Fraction(1, 100)
        out = clean_fixed_assignment(g, {0: "a"}, weights)
        assert out.data_value(0) == "a"

    def test_matches_permutation_oracle(self, rng):
        for _ in range(120):
            n = rng.randint(1, 5)
            values = [f"v{i}" for i in range(n)]
            g = DataGraph(range(n), dict(enumerate(values)), [], ["e"])
            weights = {}
            for value in values:
                for node in range(n):
                    if rng.random() < 0.12:
                        continue
                    weights[(value, node)] = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            want, _ = best_assignment_by_product(weights, values, range(n))
            if want is None:
                with pytest.raises(Exception):
                    clean_fixed_assignment(g, {}, weights)
                continue
            out = clean_fixed_assignment(g, {}, weights)
            got = Fraction(1)
            for node in range(n):
                got *= weights.get((out.data_value(node), node), Fraction(0))
            assert got == want


class TestCardinality:
    def test_matching_histogram_keeps_graph(self):
        g = DataGraph([0, 1, 2], {0: "a", 1: "a", 2: "b"}, [], ["e"])
        delta = TransitionCost.uniform(["a", "b"])
        out = clean_cardinality(g, {"a": 2, "b": 1}, delta)
        assert out == g
        assert histogram_deviation(out, {"a": 2, "b": 1}) == 0

    def test_forced_flip(self):
        g = DataGraph([0, 1], {0: "a", 1: "a"}, [], ["e"])
        delta = TransitionCost.from_table(
            {("b", "a"): 1, ("a", "b"): 3}, ["a", "b"], default=9
        )
        out = clean_cardinality(g, {"a": 1, "b": 1}, delta)
        assert sorted(out.data.values()) == ["a", "b"]
        assert transition_cost_total(delta, out, g) == 1

    def test_bad_target_rejected(self):
        g = DataGraph([0], {0: "a"}, [], ["e"])
        with pytest.raises(ValueError):
            clean_cardinality(g, {"a": 2}, TransitionCost.uniform(["a"]))

    def test_matches_exhaustive_oracle(self, rng):
        for _ in range(120):
            n = rng.randint(1, 5)
            universe = ["a", "b", "c", "d"][: rng.randint(1, 4)]
            g = DataGraph(
                range(n), {v: rng.choice(universe) for v in range(n)}, [], ["e"]
            )
            counts = [0] * len(universe)
            for _ in range(n):
                counts[rng.randrange(len(universe))] += 1
            target = {c: k for c, k in zip(universe, counts) if k}
            table = {
                (c, d): rng.randint(0, 6)
                for c in universe
                for d in universe
                if c != d
            }
            delta = TransitionCost.from_table(table, universe)
            want_cost, _ = best_histogram_assignment(g, target, delta.cost)
            out = clean_cardinality(g, target, delta)
            assert histogram_deviation(out, target) == 0
            assert transition_cost_total(delta, out, g) == want_cost
