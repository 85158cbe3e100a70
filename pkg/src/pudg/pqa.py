"""Probabilistic query answering by exact posterior enumeration.

The probability that an expression holds in the clean world is the posterior
mass of the candidate worlds whose evaluation satisfies it: globally (at
every node, or every pair for path expressions) or existentially (at least
one node / pair).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .emdg import Pudg, inverse_realization
from .errors import NoCandidateError
from .gxpath.ast import Expr
from .gxpath.evaluator import satisfies_global, satisfies_somewhere


@dataclass(frozen=True)
class PqaAnswer:
    probability: Fraction
    mass_accounted: Fraction
    candidates_examined: int


def _answer(pudg: Pudg, query: Expr, indicator, jobs: int) -> PqaAnswer:
    posterior = inverse_realization(pudg)
    if not posterior:
        raise NoCandidateError(
            "the posterior is empty: no candidate world explains the observation"
        )
    worlds = [g for g, _ in posterior]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(indicator, worlds))
    else:
        verdicts = [indicator(g) for g in worlds]
    probability = sum(
        (mass for (_, mass), holds in zip(posterior, verdicts) if holds),
        Fraction(0),
    )
    mass_accounted = sum((mass for _, mass in posterior), Fraction(0))
    return PqaAnswer(probability, mass_accounted, len(posterior))


def global_pqa(pudg: Pudg, query: Expr, jobs: int = 1) -> PqaAnswer:
    """Posterior probability that the query holds at every node (or pair)."""
    return _answer(pudg, query, lambda g: satisfies_global(g, query), jobs)


def existential_pqa(pudg: Pudg, query: Expr, jobs: int = 1) -> PqaAnswer:
    """Posterior probability that the query holds somewhere."""
    return _answer(pudg, query, lambda g: satisfies_somewhere(g, query), jobs)


def pqa_bound(pudg: Pudg, query: Expr, bound: Fraction, jobs: int = 1) -> bool:
    """Whether the global probability strictly exceeds the bound."""
    return global_pqa(pudg, query, jobs).probability > Fraction(bound)
