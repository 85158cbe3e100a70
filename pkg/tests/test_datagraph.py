import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pudg.datagraph import (
    DataGraph,
    equiv_up_to_data,
    fresh_symbols,
    is_subgraph,
    missing_edges,
    parse_graph,
    parse_graph_with_origin,
    serialize_graph,
)
from pudg.errors import AlphabetMismatchError, GraphError

from generators import random_graph


def social_graph() -> DataGraph:
    """Four people, three relation kinds."""
    return DataGraph(
        nodes=[1, 2, 3, 4],
        data={1: "Alice", 2: "Dave", 3: "Carl", 4: "Bob"},
        edges=[
            (1, "blocked", 4),
            (4, "follows", 1),
            (1, "follows", 3),
            (1, "friend", 2),
            (2, "friend", 1),
            (2, "friend", 3),
            (3, "friend", 2),
            (3, "follows", 4),
            (4, "follows", 3),
        ],
        edge_alphabet=["friend", "follows", "blocked"],
    )


def triangle_network() -> DataGraph:
    return DataGraph(
        nodes=[0, 1, 2],
        data={0: "Alice", 1: "Bob", 2: "Carl"},
        edges=[
            (0, "friend", 1),
            (1, "friend", 0),
            (1, "follows", 0),
            (1, "follows", 2),
        ],
        edge_alphabet=["friend", "follows"],
    )


class TestConstruction:
    def test_dangling_edge_rejected(self):
        with pytest.raises(GraphError):
            DataGraph([1], {1: "x"}, [(1, "a", 99)], ["a"])

    def test_unknown_label_rejected(self):
        with pytest.raises(GraphError):
            DataGraph([1], {1: "x"}, [(1, "b", 1)], ["a"])

    def test_missing_data_rejected(self):
        with pytest.raises(GraphError):
            DataGraph([1, 2], {1: "x"}, [], ["a"])

    def test_empty_data_value_rejected(self):
        with pytest.raises(GraphError):
            DataGraph([1], {1: ""}, [], ["a"])

    def test_negative_node_rejected(self):
        with pytest.raises(GraphError):
            DataGraph([-1], {-1: "x"}, [], ["a"])

    def test_edge_set_semantics(self):
        g = DataGraph([1], {1: "x"}, [(1, "a", 1), (1, "a", 1)], ["a"])
        assert len(g.edges) == 1

    def test_value_semantics(self):
        g = triangle_network()
        h = triangle_network()
        assert g == h and hash(g) == hash(h)
        assert g != g.with_data({0: "Alise"})


class TestSubgraph:
    def test_reflexive(self):
        g = social_graph()
        assert is_subgraph(g, g)

    def test_dropping_a_friend_edge_gives_a_subgraph(self):
        full = triangle_network()
        damaged = full.with_edges(set(full.edges) - {(1, "friend", 0)})
        assert is_subgraph(damaged, full)
        assert not is_subgraph(full, damaged)

    def test_data_must_agree(self):
        g = triangle_network()
        h = g.with_data({2: "Karl"})
        assert not is_subgraph(g, h)

    def test_alphabet_mismatch(self):
        g = triangle_network()
        h = DataGraph(g.nodes, g.data, g.edges, ["friend", "follows", "blocked"])
        with pytest.raises(AlphabetMismatchError):
            is_subgraph(g, h)

    def test_partial_order_properties(self, rng):
        for _ in range(150):
            g = random_graph(rng, max_nodes=5)
            h = random_graph(rng, max_nodes=5)
            k = random_graph(rng, max_nodes=5)
            assert is_subgraph(g, g)
            if is_subgraph(g, h) and is_subgraph(h, g):
                assert g == h
            if is_subgraph(g, h) and is_subgraph(h, k):
                assert is_subgraph(g, k)


class TestEquivUpToData:
    def test_reflexive(self):
        g = social_graph()
        assert equiv_up_to_data(g, g)

    def test_data_ignored(self):
        g = social_graph()
        assert equiv_up_to_data(g, g.with_data({1: "Alicia"}))

    def test_edges_matter(self):
        g = social_graph()
        h = g.with_edges(set(g.edges) - {(1, "blocked", 4)})
        assert not equiv_up_to_data(g, h)

    def test_equivalence_relation(self, rng):
        for _ in range(100):
            g = random_graph(rng, max_nodes=5)
            h = g.with_data({v: "q" for v in g.nodes})
            k = g.with_data({v: "r" for v in g.nodes})
            assert equiv_up_to_data(g, h) and equiv_up_to_data(h, k)
            assert equiv_up_to_data(g, k)


class TestMissingEdges:
    def test_empty_two_nodes_two_labels(self):
        g = DataGraph([0, 1], {0: "x", 1: "x"}, [], ["a", "b"])
        assert missing_edges(g) == 8

    def test_complete_one_label(self):
        nodes = [0, 1, 2]
        edges = [(u, "a", v) for u in nodes for v in nodes]
        g = DataGraph(nodes, {v: "x" for v in nodes}, edges, ["a"])
        assert missing_edges(g) == 0

    def test_four_nodes_three_labels_nine_edges(self):
        nodes = [0, 1, 2, 3]
        edges = [(u, "a", v) for u in nodes for v in nodes][:9]
        g = DataGraph(nodes, {v: "x" for v in nodes}, edges, ["a", "b", "c"])
        assert missing_edges(g) == 3 * 16 - 9

    def test_count_identity(self, rng):
        for _ in range(100):
            g = random_graph(rng)
            n = len(g.nodes)
            assert missing_edges(g) + len(g.edges) == len(g.edge_alphabet) * n * n


class TestSerialization:
    def test_round_trip(self, rng):
        for _ in range(100):
            g = random_graph(rng, sparse_ids=rng.random() < 0.5)
            assert parse_graph(serialize_graph(g)) == g

    def test_deterministic(self):
        g = social_graph()
        assert serialize_graph(g) == serialize_graph(social_graph())
        doc = json.loads(serialize_graph(g))
        assert [n["id"] for n in doc["nodes"]] == [1, 2, 3, 4]
        assert doc["edges"] == sorted(
            doc["edges"], key=lambda e: (e["from"], e["label"], e["to"])
        )

    def test_social_graph_parses(self):
        text = json.dumps(
            {
                "edge_alphabet": ["friend", "follows", "blocked"],
                "nodes": [
                    {"id": 1, "data": "Alice"},
                    {"id": 2, "data": "Dave"},
                    {"id": 3, "data": "Carl"},
                    {"id": 4, "data": "Bob"},
                ],
                "edges": [{"from": 1, "label": "friend", "to": 2}],
            }
        )
        g = parse_graph(text)
        assert g.data_value(1) == "Alice"
        assert (1, "friend", 2) in g.edges

    def test_dangling_endpoint_error(self):
        text = json.dumps(
            {
                "edge_alphabet": ["a"],
                "nodes": [{"id": 1, "data": "x"}],
                "edges": [{"from": 1, "label": "a", "to": 99}],
            }
        )
        with pytest.raises(GraphError):
            parse_graph(text)

    def test_duplicate_node_id_error(self):
        text = json.dumps(
            {
                "edge_alphabet": [],
                "nodes": [{"id": 1, "data": "x"}, {"id": 1, "data": "y"}],
                "edges": [],
            }
        )
        with pytest.raises(GraphError):
            parse_graph(text)

    def test_malformed_json_error(self):
        with pytest.raises(GraphError):
            parse_graph("{nope")

    def test_origin_round_trip(self):
        g = triangle_network()
        text = serialize_graph(g, origin=1)
        parsed, origin = parse_graph_with_origin(text)
        assert parsed == g and origin == 1

    def test_bad_origin(self):
        g = triangle_network()
        doc = json.loads(serialize_graph(g))
        doc["origin"] = 77
        with pytest.raises(GraphError):
            parse_graph(json.dumps(doc))


@given(st.sets(st.text(min_size=0, max_size=4), max_size=20), st.integers(1, 8))
def test_fresh_symbols_are_fresh(avoid, count):
    out = fresh_symbols(avoid, count, "v")
    assert len(out) == count == len(set(out))
    assert not (set(out) & avoid)
