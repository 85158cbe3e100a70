"""Exact square assignment solving over rationals.

One O(n^3) shortest-augmenting-path core (dual potentials, one row at a
time) drives two entry points:

- min_cost_assignment: minimize a sum of Fraction costs;
- max_product_assignment: maximize a product of positive Fraction weights.

The product version runs the same algorithm over the multiplicative group
of positive rationals (identity 1, "addition" is multiplication), which is
order-isomorphic to the additive case, so no logarithms and no floating
point ever enter; results are exact. Forbidden cells are None (additive)
or weight 0 (product) and make the assignment infeasible rather than
expensive.
"""

from __future__ import annotations

import operator
from collections.abc import Callable, Sequence
from fractions import Fraction

from ..errors import InfeasibleError

Cell = Fraction | None  # None = forbidden


def _solve(
    cost: Sequence[Sequence[Cell]],
    identity: Fraction,
    combine: Callable[[Fraction, Fraction], Fraction],
    remove: Callable[[Fraction, Fraction], Fraction],
) -> list[int]:
    """Column index per row minimizing the combined cost.

    `combine`/`remove` are the group operation and its inverse; `identity`
    its unit. Raises InfeasibleError when forbidden cells block every
    perfect assignment.
    """
    n = len(cost)
    if n == 0:
        return []
    if any(len(row) != n for row in cost):
        raise ValueError("cost matrix must be square")

    # 1-based potentials; p[j] is the row matched to column j (0 = free).
    u = [identity] * (n + 1)
    v = [identity] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv: list[Fraction | None] = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta: Fraction | None = None
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cell = cost[i0 - 1][j - 1]
                if cell is not None:
                    reduced = remove(remove(cell, u[i0]), v[j])
                    if minv[j] is None or reduced < minv[j]:
                        minv[j] = reduced
                        way[j] = j0
                if minv[j] is not None and (delta is None or minv[j] < delta):
                    delta = minv[j]
                    j1 = j
            if delta is None:
                raise InfeasibleError("forbidden cells admit no perfect assignment")
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] = combine(u[p[j]], delta)
                    v[j] = remove(v[j], delta)
                elif minv[j] is not None:
                    minv[j] = remove(minv[j], delta)
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    col_of_row = [0] * n
    for j in range(1, n + 1):
        if p[j]:
            col_of_row[p[j] - 1] = j - 1
    return col_of_row


def min_cost_assignment(
    cost: Sequence[Sequence[Fraction | int | None]],
) -> tuple[list[int], Fraction]:
    """Exact minimum-total-cost perfect assignment on a square matrix.

    Returns (column per row, total cost). None cells are forbidden.
    """
    matrix: list[list[Cell]] = [
        [None if c is None else Fraction(c) for c in row] for row in cost
    ]
    cols = _solve(matrix, Fraction(0), operator.add, operator.sub)
    total = sum((matrix[i][j] for i, j in enumerate(cols)), Fraction(0))
    return cols, total


def max_product_assignment(
    weight: Sequence[Sequence[Fraction | int]],
) -> tuple[list[int], Fraction]:
    """Exact maximum-product perfect assignment on a square matrix of
    nonnegative weights; zero cells are forbidden.

    Returns (column per row, product). Maximizing the product of weights
    equals minimizing the product of their reciprocals, which the
    multiplicative solver handles exactly.
    """
    matrix: list[list[Cell]] = []
    for row in weight:
        out_row: list[Cell] = []
        for w in row:
            w = Fraction(w)
            if w < 0:
                raise ValueError("weights must be nonnegative")
            out_row.append(None if w == 0 else 1 / w)
        matrix.append(out_row)
    cols = _solve(matrix, Fraction(1), operator.mul, operator.truediv)
    product = Fraction(1)
    for i, j in enumerate(cols):
        product *= Fraction(weight[i][j])
    return cols, product
