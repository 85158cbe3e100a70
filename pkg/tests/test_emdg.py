from fractions import Fraction
from itertools import combinations

import pytest

from pudg.datagraph import DataGraph, is_subgraph, missing_edge_slots, missing_edges
from pudg.emdg import (
    Budget,
    ExplicitPrior,
    IntensionalPrior,
    KDataPrior,
    ModelClass,
    Pudg,
    candidate_worlds,
    class_relation_holds,
    cosupport,
    cosupport_size_bound,
    edge_deletion_model,
    indicator_model,
    inverse_realization,
    node_update_model,
    scale_prior,
    uniform_subset_model,
    uniform_superset_model,
    validate_class,
)
from pudg.errors import BudgetExceededError, UnsupportedModelError

from generators import random_graph
from instances import anything_goes_model, mutual_friends_prior, three_world_instance


def small_graph(edges=((0, "a", 1),)) -> DataGraph:
    return DataGraph([0, 1], {0: "x", 1: "y"}, edges, ["a", "b"])


class TestCosupport:
    def test_zero_deletions_is_identity(self):
        g = small_graph()
        model = edge_deletion_model(Fraction(1, 3), max_deletions=0)
        assert cosupport(model, g) == [g]

    def test_single_deletion_counts(self):
        g = small_graph()
        assert missing_edges(g) == 7
        model = edge_deletion_model(Fraction(1, 3), max_deletions=1)
        worlds = cosupport(model, g)
        assert len(worlds) == 1 + 7
        assert all(is_subgraph(g, w) for w in worlds)

    def test_node_update_enumeration(self):
        g = DataGraph([0, 1, 2], {0: "x", 1: "x", 2: "x"}, [], ["a"])
        f = KDataPrior.from_mapping({"x": ["x", "q"]})
        model = node_update_model(f, max_data_updates=1)
        worlds = cosupport(model, g)
        assert len(worlds) == 1 + 3
        assert all(class_relation_holds(ModelClass.NODE_UPDATE, w, g) for w in worlds)

    def test_superset_enumeration_respects_cap(self):
        g = small_graph(edges=[(0, "a", 1), (1, "a", 0)])
        model = indicator_model(ModelClass.SUPERSET, max_additions=1)
        worlds = cosupport(model, g)
        # observed itself, drop one of two edges, or drop one of two nodes
        # (dropping a node forces its incident edges away: cost > 1).
        assert g in worlds
        assert len(worlds) == 3

    def test_cosupport_within_bound(self, rng):
        for _ in range(40):
            g = random_graph(rng, max_nodes=4, labels=("a",))
            model = edge_deletion_model(Fraction(1, 2), max_deletions=rng.randint(0, 2))
            worlds = cosupport(model, g)
            assert len(worlds) <= cosupport_size_bound(model, g)
            assert all(class_relation_holds(model.klass, w, g) for w in worlds)

    def test_blind_enumeration_guarded(self):
        nodes = range(6)
        g = DataGraph(nodes, {v: "x" for v in nodes}, [], ["a", "b"])
        model = uniform_subset_model()  # no deletion bound: 2^72 supergraphs
        with pytest.raises(BudgetExceededError):
            cosupport(model, g)

    def test_general_class_unsupported(self):
        with pytest.raises(UnsupportedModelError):
            cosupport(anything_goes_model(), small_graph())


class TestSizeBound:
    def test_subset_bound_reached_by_enumeration(self):
        g = small_graph()
        model = edge_deletion_model(Fraction(1, 2), max_deletions=1)
        assert cosupport_size_bound(model, g) == 8
        assert len(cosupport(model, g)) == 8

    def test_superset_edge_only_two_nodes_one_label(self):
        g = DataGraph([0, 1], {0: "x", 1: "x"}, [], ["a"])
        model = uniform_superset_model()
        assert cosupport_size_bound(model, g) == 16

    def test_node_update_zero_changes(self):
        g = small_graph()
        model = node_update_model(KDataPrior.from_mapping({}), max_data_updates=0)
        assert cosupport_size_bound(model, g) == 1


class TestInverseRealization:
    def test_singleton(self):
        g = small_graph()
        prior = ExplicitPrior.uniform([g])
        model = edge_deletion_model(Fraction(1, 2), max_deletions=0)
        post = inverse_realization(Pudg(prior, model, g))
        assert post == [(g, Fraction(1))]

    def test_bayes_collapse(self):
        observed = small_graph()
        alive = observed.add_edges([(1, "a", 1)])
        dead = DataGraph([0, 1], {0: "q", 1: "q"}, [], ["a", "b"])
        prior = ExplicitPrior.from_pairs([(alive, Fraction(1, 2)), (dead, Fraction(1, 2))])
        model = edge_deletion_model(Fraction(1, 2))
        post = inverse_realization(Pudg(prior, model, observed))
        assert post == [(alive, Fraction(1))]

    def test_three_world_masses(self):
        pudg, w1, w2, w3 = three_world_instance()
        post = dict(inverse_realization(pudg))
        assert post[w1] == Fraction(1, 2)
        assert post[w2] == Fraction(2, 5)
        assert post[w3] == Fraction(1, 10)

    def test_empty_intersection_gives_empty_list(self):
        observed = small_graph()
        other = DataGraph([5], {5: "z"}, [], ["a", "b"])
        prior = ExplicitPrior.uniform([other])
        model = edge_deletion_model(Fraction(1, 2))
        assert inverse_realization(Pudg(prior, model, observed)) == []

    def test_posterior_sums_to_one_and_scaling_invariance(self, rng):
        for _ in range(60):
            observed = random_graph(rng, max_nodes=4, labels=("a", "b"))
            supers = [observed]
            slots = rng.sample(missing_edge_slots(observed), k=min(3, missing_edges(observed)))
            for k in range(1, len(slots) + 1):
                supers.append(observed.add_edges(slots[:k]))
            prior = ExplicitPrior.uniform(supers)
            model = edge_deletion_model(Fraction(1, 3))
            pudg = Pudg(prior, model, observed)
            post = inverse_realization(pudg)
            assert sum(m for _, m in post) == 1

            factor = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            scaled = Pudg(scale_prior(prior, factor), model, observed)
            assert inverse_realization(scaled) == post


class TestExplicitPrior:
    def test_weights_must_sum_to_one(self):
        g = small_graph()
        with pytest.raises(ValueError):
            ExplicitPrior.from_pairs([(g, Fraction(1, 2))])

    def test_duplicates_rejected(self):
        g = small_graph()
        with pytest.raises(ValueError):
            ExplicitPrior.from_pairs([(g, Fraction(1, 2)), (g, Fraction(1, 2))])


class TestIntensionalPrior:
    def test_conditional_enumeration_counts_1024(self):
        prior, observed = mutual_friends_prior()
        worlds = prior.support_into(observed, anything_goes_model(), Budget(max_candidates=2000))
        assert len(worlds) == 1024
        assert all(prior.weight(g) == Fraction(1, 1024) for g in worlds)

    def test_pudg_plumbing_uses_enumerator(self):
        prior, observed = mutual_friends_prior()
        pudg = Pudg(prior, anything_goes_model(), observed, Budget(max_candidates=2000))
        assert len(candidate_worlds(pudg)) == 1024

    def test_budget_enforced(self):
        prior, observed = mutual_friends_prior()
        pudg = Pudg(prior, anything_goes_model(), observed, Budget(max_candidates=100))
        with pytest.raises(BudgetExceededError):
            candidate_worlds(pudg)


class TestEdgeDeletionModel:
    def test_identity_weight(self):
        g = small_graph(edges=[(0, "a", 1), (1, "b", 0)])
        model = edge_deletion_model(Fraction(1, 4))
        assert model.weight(g, g) == Fraction(3, 4) ** 2

    def test_one_of_two_edges_dropped(self):
        g = small_graph(edges=[(0, "a", 1), (1, "b", 0)])
        observed = g.with_edges([(0, "a", 1)])
        model = edge_deletion_model(Fraction(1, 2))
        assert model.weight(g, observed) == Fraction(1, 4)

    def test_total_mass_one(self, rng):
        for _ in range(10):
            g = random_graph(rng, max_nodes=3, labels=("a", "b"), edge_prob=0.5)
            if len(g.edges) > 10:
                continue
            model = edge_deletion_model(Fraction(2, 5))
            edge_list = sorted(g.edges)
            total = Fraction(0)
            for k in range(len(edge_list) + 1):
                for kept in combinations(edge_list, k):
                    total += model.weight(g, g.with_edges(kept))
            assert total == 1

    def test_per_label_rates(self):
        g = small_graph(edges=[(0, "a", 1), (1, "b", 0)])
        model = edge_deletion_model(per_label={"a": Fraction(1, 2), "b": Fraction(1, 3)})
        observed = g.with_edges([(1, "b", 0)])
        assert model.weight(g, observed) == Fraction(1, 2) * Fraction(2, 3)


class TestValidateClass:
    def test_edge_deletion_is_subset(self, rng):
        samples = [random_graph(rng, max_nodes=4) for _ in range(5)]
        assert validate_class(edge_deletion_model(Fraction(1, 2)), samples)

    def test_edge_deletion_is_not_superset(self, rng):
        samples = [random_graph(rng, max_nodes=4, edge_prob=0.6, min_nodes=2) for _ in range(5)]
        inner = edge_deletion_model(Fraction(1, 2))
        mislabeled = indicator_model(ModelClass.SUPERSET)
        lying = type(inner)(
            klass=ModelClass.SUPERSET,
            weight_fn=inner.weight_fn,
            description="mislabeled",
        )
        assert not validate_class(lying, samples)

    def test_label_rewrite_is_not_node_update(self):
        g = small_graph(edges=[(0, "a", 1)])

        def weight(clean, observed):
            same_shape = clean.nodes == observed.nodes and len(clean.edges) == len(observed.edges)
            return Fraction(1) if same_shape else Fraction(0)

        from pudg.emdg import RealizationModel

        model = RealizationModel(ModelClass.NODE_UPDATE, weight)
        assert not validate_class(model, [g])
