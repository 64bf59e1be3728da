"""Exact rational primal simplex.

Solves ``max c.y`` subject to ``A y <= b`` and ``y >= 0`` with ``b >= 0``.
The origin is feasible, so no phase one is needed. Pivoting follows Bland's
rule, which rules out cycling. All arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from cactus_multipacking.exceptions import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

Rational = Fraction


@dataclass(frozen=True)
class SimplexResult:
    """Optimal value with matching primal ``y`` and dual ``x`` vectors."""

    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


def format_rational(q: Fraction) -> str:
    """Render ``q`` as ``"p/q"``."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer/decimal string exactly."""
    return Fraction(text.strip())


def maximize(
    c: Sequence[int | Fraction],
    a: Sequence[Sequence[int | Fraction]],
    b: Sequence[int | Fraction],
) -> SimplexResult:
    """Solve ``max c.y`` subject to ``A y <= b``, ``y >= 0``.

    Args:
        c: Objective coefficients, one per variable.
        a: Constraint rows.
        b: Non-negative right-hand sides.

    Returns:
        Optimal primal ``y``, dual ``x`` (one per row) and the common value.

    Raises:
        PreconditionError: If some ``b`` is negative.
        InvariantViolation: If the LP is unbounded or the optimality
            certificate fails to check.
    """
    n_vars = len(c)
    n_rows = len(a)
    if any(v < 0 for v in b):
        msg = "right-hand side must be non-negative"
        raise PreconditionError(msg)

    table = [[Fraction(v) for v in row] for row in a]
    rhs = [Fraction(v) for v in b]
    reduced = [Fraction(v) for v in c]
    objective = Fraction(0)
    nonbasic = list(range(n_vars))
    basic = list(range(n_vars, n_vars + n_rows))
    pivots = 0

    while True:
        entering = -1
        for j in range(n_vars):
            if reduced[j] > 0 and (entering < 0 or nonbasic[j] < nonbasic[entering]):
                entering = j
        if entering < 0:
            break
        leaving = -1
        best_ratio = Fraction(0)
        for i in range(n_rows):
            coeff = table[i][entering]
            if coeff <= 0:
                continue
            ratio = rhs[i] / coeff
            if (
                leaving < 0
                or ratio < best_ratio
                or (ratio == best_ratio and basic[i] < basic[leaving])
            ):
                leaving, best_ratio = i, ratio
        if leaving < 0:
            msg = "LP is unbounded"
            raise InvariantViolation(msg)
        _pivot(table, rhs, reduced, leaving, entering)
        objective += _reduced_gain(reduced, table, leaving, entering, rhs)
        basic[leaving], nonbasic[entering] = nonbasic[entering], basic[leaving]
        pivots += 1

    primal = [Fraction(0)] * n_vars
    for i, var in enumerate(basic):
        if var < n_vars:
            primal[var] = rhs[i]
    dual = [Fraction(0)] * n_rows
    for j, var in enumerate(nonbasic):
        if var >= n_vars:
            dual[var - n_vars] = -reduced[j]
    result = SimplexResult(objective, tuple(primal), tuple(dual), pivots)
    _check_certificate(result, c, a, b)
    logger.debug("Simplex optimal after %d pivots, value %s", pivots, objective)
    return result


def _reduced_gain(
    reduced: list[Fraction],
    table: list[list[Fraction]],
    leaving: int,
    entering: int,
    rhs: list[Fraction],
) -> Fraction:
    """Update reduced costs for a completed pivot; return the objective gain."""
    row = table[leaving]
    # After _pivot, row[entering] holds 1/piv and rhs[leaving] the new value.
    gain_coeff = reduced[entering]
    gain = gain_coeff * rhs[leaving]
    for j, value in enumerate(row):
        if j == entering:
            reduced[j] = -gain_coeff * value
        elif value:
            reduced[j] -= gain_coeff * value
    return gain


def _pivot(
    table: list[list[Fraction]],
    rhs: list[Fraction],
    reduced: list[Fraction],
    leaving: int,
    entering: int,
) -> None:
    """Exchange a basic and a nonbasic variable in the dictionary."""
    row = table[leaving]
    piv = row[entering]
    inv = 1 / piv
    for j in range(len(row)):
        row[j] = inv if j == entering else row[j] * inv
    rhs[leaving] *= inv
    for i, other in enumerate(table):
        if i == leaving:
            continue
        factor = other[entering]
        if not factor:
            continue
        for j, value in enumerate(row):
            if j == entering:
                other[j] = -factor * value
            elif value:
                other[j] -= factor * value
        rhs[i] -= factor * rhs[leaving]


def _check_certificate(
    result: SimplexResult,
    c: Sequence[int | Fraction],
    a: Sequence[Sequence[int | Fraction]],
    b: Sequence[int | Fraction],
) -> None:
    """Primal and dual feasibility plus equal objective values."""
    y, x = result.primal, result.dual
    if any(v < 0 for v in y) or any(v < 0 for v in x):
        msg = "simplex returned a negative variable"
        raise InvariantViolation(msg)
    for row, cap in zip(a, b, strict=True):
        load = sum(
            (Fraction(coef) * y[j] for j, coef in enumerate(row) if coef), Fraction(0)
        )
        if load > cap:
            msg = "simplex primal violates a constraint"
            raise InvariantViolation(msg)
    for j, cj in enumerate(c):
        col = sum(
            (Fraction(row[j]) * x[i] for i, row in enumerate(a) if row[j]), Fraction(0)
        )
        if col < cj:
            msg = f"simplex dual violates column {j}"
            raise InvariantViolation(msg)
    primal_value = sum((Fraction(cj) * y[j] for j, cj in enumerate(c)), Fraction(0))
    dual_value = sum((Fraction(bi) * x[i] for i, bi in enumerate(b)), Fraction(0))
    if primal_value != result.value or dual_value != result.value:
        msg = f"duality gap: primal {primal_value}, dual {dual_value}"
        raise InvariantViolation(msg)
