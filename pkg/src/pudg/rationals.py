"""Helpers for the exact rational probabilities used everywhere.

All probability arithmetic in this package is done with
:class:`fractions.Fraction`; floats only ever appear in display output.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse "3/4", "0.25" or "2" into an exact Fraction."""
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    """Render a Fraction as the canonical "num/den" string ("3/4", "2")."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
