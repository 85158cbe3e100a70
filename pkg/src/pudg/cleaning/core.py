"""Most-likely-world solvers: exhaustive cleaning and its bounded-class variants."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from ..datagraph import DataGraph
from ..emdg import (
    KDataPrior,
    ModelClass,
    Pudg,
    candidate_worlds,
    cosupport,
)
from ..errors import NoCandidateError, UnsupportedModelError


@dataclass(frozen=True)
class CleaningResult:
    best: DataGraph
    score: Fraction                 # unnormalized prior x likelihood
    probability: Fraction | None    # normalized over the examined candidates
    candidates_examined: int


def _argmax(pudg: Pudg, worlds) -> CleaningResult:
    scored: list[tuple[Fraction, DataGraph]] = []
    for g in worlds:
        mass = pudg.prior.weight(g) * pudg.model.weight(g, pudg.observed)
        if mass > 0:
            scored.append((mass, g))
    if not scored:
        raise NoCandidateError(
            "no candidate has positive prior and observation weight"
        )
    total = sum(mass for mass, _ in scored)
    best_mass, best = min(
        scored, key=lambda item: (-item[0], item[1].canonical_key())
    )
    return CleaningResult(
        best=best,
        score=best_mass,
        probability=best_mass / total,
        candidates_examined=len(scored),
    )


def clean(pudg: Pudg) -> CleaningResult:
    """The clean graph of maximal posterior mass, ties broken canonically."""
    return _argmax(pudg, candidate_worlds(pudg))


def clean_bound(pudg: Pudg, bound: Fraction) -> bool:
    """Whether some clean graph has posterior probability strictly above the bound."""
    try:
        result = clean(pudg)
    except NoCandidateError:
        return False
    return result.probability > Fraction(bound)


def _require_class(pudg: Pudg, klass: ModelClass, solver: str) -> None:
    if pudg.model.klass is not klass:
        raise UnsupportedModelError(
            f"{solver} needs a {klass.value}-class model, got {pudg.model.klass.value}"
        )


def clean_subset_bounded(pudg: Pudg, max_deletions: int) -> CleaningResult:
    """Cleaning for deletion-only observers that never drop nodes and drop
    at most `max_deletions` edges: enumerate the polynomially many
    supergraphs of the observation directly."""
    _require_class(pudg, ModelClass.SUBSET, "clean_subset_bounded")
    enum_model = replace(
        pudg.model, max_edge_deletions=max_deletions, allow_node_deletions=False
    )
    worlds = cosupport(enum_model, pudg.observed, pudg.budget)
    return _argmax(pudg, worlds)


def clean_superset_bounded(pudg: Pudg, max_additions: int) -> CleaningResult:
    """Cleaning for insertion-only observers that add at most
    `max_additions` nodes plus edges: enumerate the bounded-removal
    subgraphs of the observation."""
    _require_class(pudg, ModelClass.SUPERSET, "clean_superset_bounded")
    enum_model = replace(pudg.model, max_additions=max_additions)
    worlds = cosupport(enum_model, pudg.observed, pudg.budget)
    return _argmax(pudg, worlds)


def clean_node_update(pudg: Pudg, data_prior: KDataPrior, max_updates: int) -> CleaningResult:
    """Cleaning for data-rewriting observers guided by a per-value candidate
    map, with at most `max_updates` nodes rewritten."""
    _require_class(pudg, ModelClass.NODE_UPDATE, "clean_node_update")
    enum_model = replace(
        pudg.model, data_prior=data_prior, max_data_updates=max_updates
    )
    worlds = cosupport(enum_model, pudg.observed, pudg.budget)
    return _argmax(pudg, worlds)
