"""Immutable data-graphs: one data value per node, labeled edges, declared alphabet.

The graph is the central value type of the package. Instances are immutable
and hashable, so they can be deduplicated, used as dictionary keys and shared
freely between concurrent readers. All transformations return new graphs.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Mapping
from types import MappingProxyType

from .errors import AlphabetMismatchError, GraphError

Edge = tuple[int, str, int]


class DataGraph:
    """A finite directed graph whose nodes carry data values (non-empty
    strings) and whose edges carry labels from a finite declared alphabet.

    Node identities are arbitrary naturals and need not be contiguous. There
    is at most one edge per (source, label, target) triple; loops are allowed.
    Every node has exactly one data value.
    """

    __slots__ = ("nodes", "edges", "edge_alphabet", "_data", "_key", "_hash", "_out")

    def __init__(
        self,
        nodes: Iterable[int],
        data: Mapping[int, str],
        edges: Iterable[Edge],
        edge_alphabet: Iterable[str],
    ):
        node_set = frozenset(_as_node_id(v) for v in nodes)
        alphabet = frozenset(str(a) for a in edge_alphabet)
        data_map = {_as_node_id(k): str(v) for k, v in data.items()}

        for v in node_set:
            value = data_map.get(v)
            if value is None:
                raise GraphError(f"node {v} has no data value")
            if value == "":
                raise GraphError(f"node {v} has an empty data value")
        for v in data_map:
            if v not in node_set:
                raise GraphError(f"data value given for absent node {v}")

        edge_set = set()
        for raw in edges:
            src, label, dst = raw
            src, dst, label = _as_node_id(src), _as_node_id(dst), str(label)
            if src not in node_set:
                raise GraphError(f"edge source {src} is not a node")
            if dst not in node_set:
                raise GraphError(f"edge target {dst} is not a node")
            if label not in alphabet:
                raise GraphError(f"edge label {label!r} is not in the alphabet")
            edge_set.add((src, label, dst))

        self.nodes: frozenset[int] = node_set
        self.edges: frozenset[Edge] = frozenset(edge_set)
        self.edge_alphabet: frozenset[str] = alphabet
        self._data = data_map
        self._key = (
            tuple(sorted(node_set)),
            tuple(sorted(self.edges)),
            tuple(sorted(data_map.items())),
            tuple(sorted(alphabet)),
        )
        self._hash = hash(self._key)
        self._out: dict[int, list[Edge]] | None = None

    @property
    def data(self) -> Mapping[int, str]:
        """Read-only view of the node -> data value map."""
        return MappingProxyType(self._data)

    def data_value(self, v: int) -> str:
        return self._data[v]

    def labels_between(self, u: int, v: int) -> frozenset[str]:
        """The set of labels on edges from u to v."""
        return frozenset(l for (s, l, t) in self.edges if s == u and t == v)

    def out_edges(self, v: int) -> list[Edge]:
        if self._out is None:
            index: dict[int, list[Edge]] = {u: [] for u in self.nodes}
            for e in sorted(self.edges):
                index[e[0]].append(e)
            self._out = index
        return self._out[v]

    def canonical_key(self) -> tuple:
        """Deterministic total order over graphs: nodes, then edges, then data.

        Used for all argmax tie-breaking so solver output is reproducible.
        """
        return self._key

    # -- derived graphs ----------------------------------------------------

    def with_data(self, updates: Mapping[int, str]) -> DataGraph:
        """A copy where the given nodes take new data values."""
        new_data = dict(self._data)
        new_data.update({int(k): str(v) for k, v in updates.items()})
        return DataGraph(self.nodes, new_data, self.edges, self.edge_alphabet)

    def with_edges(self, edges: Iterable[Edge]) -> DataGraph:
        """A copy with the edge set replaced."""
        return DataGraph(self.nodes, self._data, edges, self.edge_alphabet)

    def add_edges(self, extra: Iterable[Edge], extra_labels: Iterable[str] = ()) -> DataGraph:
        """A copy with extra edges (and optionally a widened alphabet)."""
        return DataGraph(
            self.nodes,
            self._data,
            set(self.edges) | set(extra),
            set(self.edge_alphabet) | set(extra_labels),
        )

    def induced(self, keep: Iterable[int]) -> DataGraph:
        """The sub-data-graph induced by a subset of nodes."""
        keep_set = frozenset(keep)
        if not keep_set <= self.nodes:
            raise GraphError("induced subgraph nodes must come from the graph")
        return DataGraph(
            keep_set,
            {v: self._data[v] for v in keep_set},
            [e for e in self.edges if e[0] in keep_set and e[2] in keep_set],
            self.edge_alphabet,
        )

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataGraph):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (
            f"DataGraph(nodes={sorted(self.nodes)}, "
            f"edges={len(self.edges)}, alphabet={sorted(self.edge_alphabet)})"
        )


def _as_node_id(v) -> int:
    iv = int(v)
    if iv != v or iv < 0:
        raise GraphError(f"node ids must be naturals, got {v!r}")
    return iv


def is_subgraph(g: DataGraph, h: DataGraph) -> bool:
    """True iff g's nodes and edges are contained in h's and their data
    values agree on g's nodes. Both graphs must share an edge alphabet."""
    if g.edge_alphabet != h.edge_alphabet:
        raise AlphabetMismatchError(
            f"alphabets differ: {sorted(g.edge_alphabet)} vs {sorted(h.edge_alphabet)}"
        )
    return (
        g.nodes <= h.nodes
        and g.edges <= h.edges
        and all(g.data_value(v) == h.data_value(v) for v in g.nodes)
    )


def equiv_up_to_data(g: DataGraph, h: DataGraph) -> bool:
    """True iff the graphs have identical nodes and labeled edges; data
    values are ignored."""
    return g.nodes == h.nodes and g.edges == h.edges


def missing_edges(g: DataGraph) -> int:
    """How many (source, label, target) slots are unused: |alphabet| * n^2 - |edges|.

    Loops count as possible edges.
    """
    n = len(g.nodes)
    return len(g.edge_alphabet) * n * n - len(g.edges)


def missing_edge_slots(g: DataGraph) -> list[Edge]:
    """The unused (source, label, target) slots, in sorted order."""
    present = g.edges
    return [
        (u, l, v)
        for u in sorted(g.nodes)
        for l in sorted(g.edge_alphabet)
        for v in sorted(g.nodes)
        if (u, l, v) not in present
    ]


def fresh_symbols(avoid: Iterable[str], count: int, stem: str) -> list[str]:
    """Deterministically produce `count` strings absent from `avoid`.

    Tries the bare stem first, then stem#1, stem#2, ... so generated names
    stay readable. Works for data values and edge labels alike.
    """
    taken = set(avoid)
    out: list[str] = []
    candidate = stem
    counter = 0
    while len(out) < count:
        if candidate not in taken:
            out.append(candidate)
            taken.add(candidate)
        counter += 1
        candidate = f"{stem}#{counter}"
    return out


def fresh_node_id(g: DataGraph) -> int:
    return max(g.nodes, default=-1) + 1


# -- JSON wire format ------------------------------------------------------
#
# {"edge_alphabet": ["friend"], "nodes": [{"id": 1, "data": "Alice"}],
#  "edges": [{"from": 1, "label": "friend", "to": 2}], "origin": 1}
#
# The "origin" field is optional and only used by origin-evaluated instances.


def graph_to_dict(g: DataGraph, origin: int | None = None) -> dict:
    doc: dict = {
        "edge_alphabet": sorted(g.edge_alphabet),
        "nodes": [{"id": v, "data": g.data_value(v)} for v in sorted(g.nodes)],
        "edges": [
            {"from": s, "label": l, "to": t} for (s, l, t) in sorted(g.edges)
        ],
    }
    if origin is not None:
        doc["origin"] = origin
    return doc


def graph_from_dict(doc) -> tuple[DataGraph, int | None]:
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    try:
        raw_nodes = doc["nodes"]
        raw_edges = doc.get("edges", [])
        alphabet = doc["edge_alphabet"]
    except KeyError as missing:
        raise GraphError(f"graph document lacks required key {missing}") from None

    seen: set[int] = set()
    data: dict[int, str] = {}
    for item in raw_nodes:
        try:
            node_id, value = item["id"], item["data"]
        except (KeyError, TypeError):
            raise GraphError(f"bad node entry: {item!r}") from None
        node_id = _as_node_id(node_id)
        if node_id in seen:
            raise GraphError(f"duplicate node id {node_id}")
        seen.add(node_id)
        data[node_id] = str(value)

    edges = []
    for item in raw_edges:
        try:
            edges.append((item["from"], item["label"], item["to"]))
        except (KeyError, TypeError):
            raise GraphError(f"bad edge entry: {item!r}") from None

    g = DataGraph(seen, data, edges, alphabet)
    origin = doc.get("origin")
    if origin is not None:
        origin = _as_node_id(origin)
        if origin not in g.nodes:
            raise GraphError(f"origin {origin} is not a node")
    return g, origin


def parse_graph(text: str) -> DataGraph:
    """Parse the JSON graph format. The optional origin field is validated
    but dropped; use parse_graph_with_origin to keep it."""
    return parse_graph_with_origin(text)[0]


def parse_graph_with_origin(text: str) -> tuple[DataGraph, int | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from None
    return graph_from_dict(doc)


def serialize_graph(g: DataGraph, origin: int | None = None) -> str:
    """Canonical serialization: nodes ascending, edges sorted by
    (source, label, target), keys sorted. parse(serialize(g)) == g."""
    return json.dumps(graph_to_dict(g, origin), sort_keys=True, indent=2)
