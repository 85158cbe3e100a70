"""Priors over data-graphs, noisy observers, and their exact Bayesian inversion.

A prior assigns nonnegative rational mass to clean graphs; a realization
model (the noisy observer) assigns each clean graph a sub-distribution over
observations. Given one concrete observation, the posterior over clean
graphs is the normalized product of the two — computed here with exact
rational arithmetic over an explicitly enumerated candidate set.

Enumeration never truncates silently: when a candidate set cannot be
produced within budget the caller gets a hard error.
"""

from __future__ import annotations

import enum
from collections import Counter
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb

from .datagraph import (
    DataGraph,
    equiv_up_to_data,
    fresh_symbols,
    is_subgraph,
    missing_edge_slots,
)
from .errors import BudgetExceededError, UnsupportedModelError


class ModelClass(enum.Enum):
    SUBSET = "subset"          # observer only deletes: observed <= clean
    SUPERSET = "superset"      # observer only adds: observed >= clean
    UPDATE = "update"          # same shape, labels and data may be rewritten
    NODE_UPDATE = "node_update"  # same shape and labels, only data rewritten
    GENERAL = "general"


def class_relation_holds(klass: ModelClass, clean: DataGraph, observed: DataGraph) -> bool:
    """The structural property every positive-weight (clean, observed) pair
    of a declared class must satisfy."""
    if klass is ModelClass.SUBSET:
        return is_subgraph(observed, clean)
    if klass is ModelClass.SUPERSET:
        return is_subgraph(clean, observed)
    if klass is ModelClass.NODE_UPDATE:
        return equiv_up_to_data(clean, observed)
    if klass is ModelClass.UPDATE:
        if clean.nodes != observed.nodes:
            return False
        pair_counts = lambda g: Counter((s, t) for (s, _, t) in g.edges)
        return pair_counts(clean) == pair_counts(observed)
    return True


@dataclass(frozen=True)
class Budget:
    """Caps on exact enumeration. Exceeding any cap raises; nothing is dropped."""

    max_candidates: int = 500_000
    max_graph_size: int = 10_000  # nodes + edges per candidate
    blind_exponent_cap: int = 20  # refuse blind enumerations beyond 2**cap


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class KDataPrior:
    """Per-value candidate map: which clean values an observed value may
    stand for. Each candidate set has at most k members."""

    k: int
    candidates: Callable[[str], frozenset[str]]

    def of(self, value: str) -> frozenset[str]:
        out = frozenset(self.candidates(value))
        if len(out) > self.k:
            raise ValueError(f"candidate set for {value!r} exceeds k={self.k}")
        return out

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[str]], k: int | None = None) -> KDataPrior:
        table = {key: frozenset(vals) for key, vals in mapping.items()}
        width = max((len(v) for v in table.values()), default=1)
        if k is None:
            k = max(width, 1)
        # Unlisted values can only stand for themselves.
        return cls(k, lambda c: table.get(c, frozenset({c})))


@dataclass(frozen=True)
class RealizationModel:
    """A noisy observer: weight(clean, observed) is the probability of
    seeing `observed` when the world is `clean`.

    The budget fields describe which transitions get positive weight; they
    are what make cosupport enumeration finite for the structural classes.
    """

    klass: ModelClass
    weight_fn: Callable[[DataGraph, DataGraph], Fraction]
    max_edge_deletions: int | None = None     # subset
    allow_node_deletions: bool = False        # subset
    max_additions: int | None = None          # superset: nodes + edges added
    allow_node_additions: bool = True         # superset
    max_data_updates: int | None = None       # node-update
    data_prior: KDataPrior | None = None      # node-update
    description: str = "custom"

    def weight(self, clean: DataGraph, observed: DataGraph) -> Fraction:
        return Fraction(self.weight_fn(clean, observed))


# -- built-in observers ---------------------------------------------------------


def edge_deletion_model(
    p: Fraction | None = None,
    *,
    per_label: Mapping[str, Fraction] | None = None,
    max_deletions: int | None = None,
) -> RealizationModel:
    """Independent edge dropout: each clean edge survives with probability
    1 - p (per-label rates via `per_label`). Node set and data never change.
    With `max_deletions`, transitions dropping more edges get weight zero.
    """
    if (p is None) == (per_label is None):
        raise ValueError("give exactly one of p or per_label")
    if per_label is None:
        rates: Mapping[str, Fraction] | None = None
        base = Fraction(p)
        if not 0 < base < 1:
            raise ValueError("p must lie strictly between 0 and 1")
    else:
        rates = {l: Fraction(q) for l, q in per_label.items()}
        if any(not 0 < q < 1 for q in rates.values()):
            raise ValueError("every per-label rate must lie strictly between 0 and 1")

    def weight(clean: DataGraph, observed: DataGraph) -> Fraction:
        if clean.nodes != observed.nodes or not is_subgraph(observed, clean):
            return Fraction(0)
        deleted = clean.edges - observed.edges
        if max_deletions is not None and len(deleted) > max_deletions:
            return Fraction(0)
        out = Fraction(1)
        if rates is None:
            out *= base ** len(deleted) * (1 - base) ** len(observed.edges)
        else:
            for (_, label, _) in deleted:
                out *= rates[label]
            for (_, label, _) in observed.edges:
                out *= 1 - rates[label]
        return out

    return RealizationModel(
        ModelClass.SUBSET,
        weight,
        max_edge_deletions=max_deletions,
        allow_node_deletions=False,
        description="edge_deletion",
    )


def uniform_subset_model() -> RealizationModel:
    """Observe any edge-subset of the clean graph, uniformly: 2^-|edges|."""

    def weight(clean: DataGraph, observed: DataGraph) -> Fraction:
        if clean.nodes != observed.nodes or not is_subgraph(observed, clean):
            return Fraction(0)
        return Fraction(1, 2 ** len(clean.edges))

    return RealizationModel(
        ModelClass.SUBSET, weight, allow_node_deletions=False, description="uniform_subset"
    )


def uniform_superset_model() -> RealizationModel:
    """Observe any edge-superset of the clean graph on the same nodes,
    uniformly over the unused (source, label, target) slots."""

    def weight(clean: DataGraph, observed: DataGraph) -> Fraction:
        if clean.nodes != observed.nodes or not is_subgraph(clean, observed):
            return Fraction(0)
        n = len(clean.nodes)
        free = len(clean.edge_alphabet) * n * n - len(clean.edges)
        return Fraction(1, 2**free)

    return RealizationModel(
        ModelClass.SUPERSET, weight, allow_node_additions=False, description="uniform_superset"
    )


def indicator_model(
    klass: ModelClass,
    *,
    max_edge_deletions: int | None = None,
    max_additions: int | None = None,
    allow_node_additions: bool = True,
    max_data_updates: int | None = None,
    data_prior: KDataPrior | None = None,
) -> RealizationModel:
    """Weight 1 on every transition the declared class (and bounds) allow.

    The weights form no distribution; they are useful when the prior carries
    all the preference structure and the observer merely gates transitions.
    """

    def weight(clean: DataGraph, observed: DataGraph) -> Fraction:
        if not class_relation_holds(klass, clean, observed):
            return Fraction(0)
        if klass is ModelClass.SUBSET:
            if clean.nodes != observed.nodes:
                return Fraction(0)
            if (
                max_edge_deletions is not None
                and len(clean.edges - observed.edges) > max_edge_deletions
            ):
                return Fraction(0)
        if klass is ModelClass.SUPERSET:
            added = len(observed.nodes - clean.nodes) + len(observed.edges - clean.edges)
            if max_additions is not None and added > max_additions:
                return Fraction(0)
            if not allow_node_additions and observed.nodes != clean.nodes:
                return Fraction(0)
        if klass is ModelClass.NODE_UPDATE:
            changed = [v for v in clean.nodes if clean.data_value(v) != observed.data_value(v)]
            if max_data_updates is not None and len(changed) > max_data_updates:
                return Fraction(0)
            if data_prior is not None and any(
                clean.data_value(v) not in data_prior.of(observed.data_value(v))
                for v in changed
            ):
                return Fraction(0)
        return Fraction(1)

    return RealizationModel(
        klass,
        weight,
        max_edge_deletions=max_edge_deletions,
        allow_node_deletions=False,
        max_additions=max_additions,
        allow_node_additions=allow_node_additions,
        max_data_updates=max_data_updates,
        data_prior=data_prior,
        description=f"indicator_{klass.value}",
    )


def node_update_model(
    data_prior: KDataPrior, max_data_updates: int | None
) -> RealizationModel:
    """Indicator observer for data rewrites guided by a k-data-prior."""
    return indicator_model(
        ModelClass.NODE_UPDATE, max_data_updates=max_data_updates, data_prior=data_prior
    )


# -- priors ---------------------------------------------------------------------


class Prior:
    """A probability distribution over clean data-graphs."""

    def weight(self, g: DataGraph) -> Fraction:
        raise NotImplementedError

    def support_into(
        self, observed: DataGraph, model: RealizationModel, budget: Budget
    ) -> list[DataGraph] | None:
        """Positive-weight graphs that can realize into the observation, or
        None when this prior has no way to enumerate them."""
        return None


@dataclass(frozen=True)
class ExplicitPrior(Prior):
    """A finite list of (graph, weight) pairs with weights summing to 1."""

    entries: tuple[tuple[DataGraph, Fraction], ...]
    _table: Mapping[DataGraph, Fraction] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table: dict[DataGraph, Fraction] = {}
        total = Fraction(0)
        for g, w in self.entries:
            w = Fraction(w)
            if w <= 0:
                raise ValueError("explicit prior weights must be positive")
            if g in table:
                raise ValueError("explicit prior lists a graph twice")
            table[g] = w
            total += w
        if total != 1:
            raise ValueError(f"explicit prior weights sum to {total}, not 1")
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[DataGraph, Fraction]]) -> ExplicitPrior:
        return cls(tuple((g, Fraction(w)) for g, w in pairs))

    @classmethod
    def uniform(cls, graphs: Iterable[DataGraph]) -> ExplicitPrior:
        graphs = list(graphs)
        share = Fraction(1, len(graphs))
        return cls.from_pairs((g, share) for g in graphs)

    def weight(self, g: DataGraph) -> Fraction:
        return self._table.get(g, Fraction(0))

    def support(self) -> list[DataGraph]:
        return sorted(self._table, key=DataGraph.canonical_key)

    def support_into(self, observed, model, budget):
        return [g for g in self.support() if model.weight(g, observed) > 0]


class IntensionalPrior(Prior):
    """A prior given by a weight oracle, optionally with a conditional
    support enumerator.

    The enumerator receives (observed, model, budget) and yields every
    positive-weight graph that can realize into the observation. Without
    one, this prior can only be used where the observer's class makes the
    cosupport enumerable on its own.
    """

    def __init__(
        self,
        weight_fn: Callable[[DataGraph], Fraction],
        enumerator: Callable[[DataGraph, RealizationModel, Budget], Iterable[DataGraph]]
        | None = None,
        description: str = "intensional",
    ):
        self._weight_fn = weight_fn
        self._enumerator = enumerator
        self.description = description

    def weight(self, g: DataGraph) -> Fraction:
        return Fraction(self._weight_fn(g))

    def support_into(self, observed, model, budget):
        if self._enumerator is None:
            return None
        out: list[DataGraph] = []
        for g in self._enumerator(observed, model, budget):
            if len(out) >= budget.max_candidates:
                raise BudgetExceededError(
                    f"conditional support enumeration exceeded {budget.max_candidates} graphs"
                )
            if self.weight(g) > 0 and model.weight(g, observed) > 0:
                out.append(g)
        return _dedup_sorted(out)


class _ScaledPrior(Prior):
    def __init__(self, inner: Prior, factor: Fraction):
        self._inner = inner
        self._factor = factor

    def weight(self, g: DataGraph) -> Fraction:
        return self._inner.weight(g) * self._factor

    def support_into(self, observed, model, budget):
        return self._inner.support_into(observed, model, budget)


def scale_prior(prior: Prior, factor: Fraction) -> Prior:
    """The same prior with every weight multiplied by a positive constant.

    Deliberately unnormalized: posterior computations must be invariant
    under this, which the tests exercise.
    """
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return _ScaledPrior(prior, factor)


@dataclass(frozen=True)
class Pudg:
    """One concrete cleaning/query instance: prior, observer, observation."""

    prior: Prior
    model: RealizationModel
    observed: DataGraph
    budget: Budget = DEFAULT_BUDGET


# -- cosupport enumeration --------------------------------------------------------


def cosupport_size_bound(model: RealizationModel, observed: DataGraph) -> int:
    """Closed-form upper bound on the cosupport size for the model's class."""
    n = len(observed.nodes)
    if model.klass is ModelClass.SUBSET:
        if model.allow_node_deletions:
            raise UnsupportedModelError(
                "no closed-form cosupport bound with node deletions: deleted "
                "nodes' data values are unbounded"
            )
        free = len(missing_edge_slots(observed))
        k = free if model.max_edge_deletions is None else min(model.max_edge_deletions, free)
        return sum(comb(free, i) for i in range(k + 1))
    if model.klass is ModelClass.SUPERSET:
        if model.max_additions is not None:
            items = n + len(observed.edges)
            top = min(model.max_additions, items)
            return sum(comb(items, j) for j in range(top + 1))
        labels = len(observed.edge_alphabet)
        if not model.allow_node_additions:
            return 2 ** (n * n * labels)
        return sum(comb(n, i) * 2 ** (i * i * labels) for i in range(n + 1))
    if model.klass is ModelClass.NODE_UPDATE:
        if model.data_prior is None:
            raise UnsupportedModelError("node-update bound needs a k-data-prior")
        k = model.data_prior.k
        z = n if model.max_data_updates is None else min(model.max_data_updates, n)
        return sum(comb(n, i) * k**i for i in range(z + 1))
    raise UnsupportedModelError(f"no structural cosupport bound for class {model.klass.value}")


def _dedup_sorted(graphs: Iterable[DataGraph]) -> list[DataGraph]:
    return sorted(set(graphs), key=DataGraph.canonical_key)


def _check_budget(count: int, budget: Budget) -> None:
    if count > budget.max_candidates:
        raise BudgetExceededError(
            f"enumeration needs {count} candidates, budget allows {budget.max_candidates}"
        )


def _subset_cosupport(model, observed, budget) -> list[DataGraph]:
    if model.allow_node_deletions:
        raise UnsupportedModelError(
            "cannot enumerate the cosupport of a node-deleting subset observer; "
            "supply a prior with a conditional support enumerator"
        )
    slots = missing_edge_slots(observed)
    if model.max_edge_deletions is None:
        if len(slots) > budget.blind_exponent_cap:
            raise BudgetExceededError(
                f"blind supergraph enumeration over {len(slots)} free slots exceeds "
                f"the 2^{budget.blind_exponent_cap} cap"
            )
        k = len(slots)
    else:
        k = min(model.max_edge_deletions, len(slots))
    _check_budget(sum(comb(len(slots), i) for i in range(k + 1)), budget)
    out = []
    for i in range(k + 1):
        for extra in combinations(slots, i):
            out.append(observed.add_edges(extra))
    return out


def _superset_cosupport(model, observed, budget) -> list[DataGraph]:
    nodes = sorted(observed.nodes)
    cap = model.max_additions
    if cap is None:
        blind_items = (len(nodes) if model.allow_node_additions else 0) + len(observed.edges)
        if blind_items > budget.blind_exponent_cap:
            raise BudgetExceededError(
                f"blind subgraph enumeration over {blind_items} removable items exceeds "
                f"the 2^{budget.blind_exponent_cap} cap"
            )
    out = []
    count = 0
    max_node_drop = 0
    if model.allow_node_additions:
        max_node_drop = len(nodes) if cap is None else min(cap, len(nodes))
    for drop_n in range(max_node_drop + 1):
        for dropped in combinations(nodes, drop_n):
            kept = observed.induced(set(nodes) - set(dropped))
            forced = len(observed.edges) - len(kept.edges)
            removed_so_far = drop_n + forced
            if cap is not None and removed_so_far > cap:
                continue
            edge_list = sorted(kept.edges)
            spare = len(edge_list) if cap is None else min(cap - removed_so_far, len(edge_list))
            for drop_e in range(spare + 1):
                for gone in combinations(edge_list, drop_e):
                    count += 1
                    _check_budget(count, budget)
                    out.append(kept.with_edges(set(edge_list) - set(gone)))
    return out


def _node_update_cosupport(model, observed, budget) -> list[DataGraph]:
    if model.data_prior is None:
        raise UnsupportedModelError(
            "node-update cosupport needs a k-data-prior on the model"
        )
    f = model.data_prior
    nodes = sorted(observed.nodes)
    z = len(nodes) if model.max_data_updates is None else min(model.max_data_updates, len(nodes))
    out = [observed]
    count = 1
    for i in range(1, z + 1):
        for chosen in combinations(nodes, i):
            pools = []
            for v in chosen:
                alternatives = sorted(f.of(observed.data_value(v)) - {observed.data_value(v)})
                pools.append(alternatives)
            for pick in product(*pools):
                count += 1
                _check_budget(count, budget)
                out.append(observed.with_data(dict(zip(chosen, pick))))
    return out


def cosupport(
    model: RealizationModel, observed: DataGraph, budget: Budget = DEFAULT_BUDGET
) -> list[DataGraph]:
    """Every graph the observer could have turned into `observed`, i.e.
    weight(clean, observed) > 0, in canonical order without duplicates."""
    if model.klass is ModelClass.SUBSET:
        raw = _subset_cosupport(model, observed, budget)
    elif model.klass is ModelClass.SUPERSET:
        raw = _superset_cosupport(model, observed, budget)
    elif model.klass is ModelClass.NODE_UPDATE:
        raw = _node_update_cosupport(model, observed, budget)
    else:
        raise UnsupportedModelError(
            f"class {model.klass.value} has no structural cosupport enumeration; "
            "supply a prior with a conditional support enumerator"
        )
    return _dedup_sorted(g for g in raw if model.weight(g, observed) > 0)


def _bounds_declared(model: RealizationModel) -> bool:
    if model.klass is ModelClass.SUBSET:
        return model.max_edge_deletions is not None and not model.allow_node_deletions
    if model.klass is ModelClass.SUPERSET:
        return model.max_additions is not None
    if model.klass is ModelClass.NODE_UPDATE:
        return model.data_prior is not None
    return False


def _structurally_enumerable(model: RealizationModel, observed: DataGraph, budget: Budget) -> bool:
    try:
        return cosupport_size_bound(model, observed) <= budget.max_candidates
    except UnsupportedModelError:
        return False


def candidate_worlds(pudg: Pudg) -> list[DataGraph]:
    """The graphs over which cleaning and query answering range: positive
    prior weight and positive observation weight, canonically ordered.

    Explicit priors are walked directly. A model with declared structural
    bounds enumerates its cosupport; otherwise the prior's conditional
    support enumerator is consulted; blind capped enumeration over all
    sub/supergraphs is the last resort.
    """
    prior, model, observed, budget = pudg.prior, pudg.model, pudg.observed, pudg.budget
    if isinstance(prior, ExplicitPrior):
        return prior.support_into(observed, model, budget)
    if _bounds_declared(model) and _structurally_enumerable(model, observed, budget):
        worlds = cosupport(model, observed, budget)
        return [g for g in worlds if prior.weight(g) > 0]
    enumerated = prior.support_into(observed, model, budget)
    if enumerated is not None:
        return enumerated
    # Last resort; raises its own specific error when out of reach.
    worlds = cosupport(model, observed, budget)
    return [g for g in worlds if prior.weight(g) > 0]


def inverse_realization(pudg: Pudg) -> list[tuple[DataGraph, Fraction]]:
    """The posterior over clean graphs given the observation.

    Exact rationals summing to 1; graphs with zero posterior mass are
    omitted; an empty candidate set yields an empty list.
    """
    scored: list[tuple[DataGraph, Fraction]] = []
    for g in candidate_worlds(pudg):
        mass = pudg.prior.weight(g) * pudg.model.weight(g, pudg.observed)
        if mass > 0:
            scored.append((g, mass))
    total = sum(mass for _, mass in scored)
    if total == 0:
        return []
    return [(g, mass / total) for g, mass in scored]


def validate_class(
    model: RealizationModel,
    sample_clean_graphs: Iterable[DataGraph],
    extra_pairs: Iterable[tuple[DataGraph, DataGraph]] = (),
) -> bool:
    """Spot-check the declared class: every positive-weight (clean, observed)
    pair among generated perturbations (plus any extra pairs) must satisfy
    the class's structural property."""
    for clean in sample_clean_graphs:
        for observed in _perturbations(clean):
            if model.weight(clean, observed) > 0 and not class_relation_holds(
                model.klass, clean, observed
            ):
                return False
    for clean, observed in extra_pairs:
        if model.weight(clean, observed) > 0 and not class_relation_holds(
            model.klass, clean, observed
        ):
            return False
    return True


def _perturbations(g: DataGraph) -> Iterable[DataGraph]:
    yield g
    for e in sorted(g.edges):
        yield g.with_edges(g.edges - {e})
    for slot in missing_edge_slots(g)[:100]:
        yield g.add_edges([slot])
    for v in sorted(g.nodes):
        rest = g.nodes - {v}
        yield g.induced(rest)
    (fresh_value,) = fresh_symbols(set(g.data.values()), 1, "new")
    fresh_id = max(g.nodes, default=-1) + 1
    yield DataGraph(
        set(g.nodes) | {fresh_id},
        {**dict(g.data), fresh_id: fresh_value},
        g.edges,
        g.edge_alphabet,
    )
    values = sorted(set(g.data.values()) | {fresh_value})
    for v in sorted(g.nodes):
        for value in values:
            if value != g.data_value(v):
                yield g.with_data({v: value})
    for e in sorted(g.edges):
        s, label, t = e
        for other in sorted(g.edge_alphabet):
            if other != label:
                yield g.with_edges((g.edges - {e}) | {(s, other, t)})
