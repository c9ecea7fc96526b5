"""Lottery expression trees and the exact algebra over them.

Expressions denote |S| x |C| row-stochastic matrices built from literal
matrices, constant lotteries, chance lotteries, event indicators and
convex mixtures, optionally restricted to an event ("given").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .model import (
    BadWeight,
    Direction,
    Lottery,
    Space,
    ZERO,
    SdeuFunction,
    parse_rat,
    validate_lottery,
)


@dataclass(frozen=True)
class MatrixExpr:
    rows: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ConstExpr:
    """The lottery that yields one fixed consequence in every state."""

    consequence: str


@dataclass(frozen=True)
class ChanceExpr:
    """Best consequence with chance q, worst otherwise, in every state."""

    q: Fraction


@dataclass(frozen=True)
class EventExpr:
    """Best consequence on the event, worst off it."""

    states: tuple[str, ...]


@dataclass(frozen=True)
class MixExpr:
    weight: Fraction
    left: "LotteryExpr"
    right: "LotteryExpr"


@dataclass(frozen=True)
class GivenExpr:
    """Replace rows off the event with the rows of `off` (worst by default)."""

    inner: "LotteryExpr"
    states: tuple[str, ...]
    off: Optional["LotteryExpr"] = None


LotteryExpr = Union[MatrixExpr, ConstExpr, ChanceExpr, EventExpr, MixExpr, GivenExpr]


def mix(weight, left: LotteryExpr, right: LotteryExpr) -> MixExpr:
    w = parse_rat(weight)
    if not (0 <= w <= 1):
        raise BadWeight(f"mixture weight {w} outside [0,1]")
    return MixExpr(w, left, right)


def chance(q) -> ChanceExpr:
    q = parse_rat(q)
    if not (0 <= q <= 1):
        raise BadWeight(f"chance {q} outside [0,1]")
    return ChanceExpr(q)


def eval_expr(expr: LotteryExpr, space: Space) -> Lottery:
    if isinstance(expr, MatrixExpr):
        return validate_lottery(expr.rows, space)
    if isinstance(expr, ConstExpr):
        c = space.consequence_index(expr.consequence)
        row = tuple(
            Fraction(1) if j == c else ZERO for j in range(space.nc)
        )
        return Lottery(tuple(row for _ in range(space.ns)))
    if isinstance(expr, ChanceExpr):
        row = (Fraction(1) - expr.q, expr.q) + (ZERO,) * (space.nc - 2)
        return Lottery(tuple(row for _ in range(space.ns)))
    if isinstance(expr, EventExpr):
        ev = space.event(expr.states)
        on = (ZERO, Fraction(1)) + (ZERO,) * (space.nc - 2)
        off = (Fraction(1), ZERO) + (ZERO,) * (space.nc - 2)
        return Lottery(tuple(on if s in ev else off for s in range(space.ns)))
    if isinstance(expr, MixExpr):
        a = eval_expr(expr.left, space).probs
        b = eval_expr(expr.right, space).probs
        w = expr.weight
        return Lottery(
            tuple(
                tuple(w * x + (1 - w) * y for x, y in zip(ra, rb))
                for ra, rb in zip(a, b)
            )
        )
    if isinstance(expr, GivenExpr):
        inner = eval_expr(expr.inner, space).probs
        ev = space.event(expr.states)
        if expr.off is None:
            off_row = (Fraction(1),) + (ZERO,) * (space.nc - 1)
            off = tuple(off_row for _ in range(space.ns))
        else:
            off = eval_expr(expr.off, space).probs
        return Lottery(
            tuple(inner[s] if s in ev else off[s] for s in range(space.ns))
        )
    raise TypeError(f"not a lottery expression: {expr!r}")


def direction(pref, space: Space) -> Direction:
    return eval_expr(pref.lhs, space) - eval_expr(pref.rhs, space)


def expected_utility(v: SdeuFunction, obj) -> Fraction:
    """Sum_{s,c} obj(s,c) v(s,c) for a Lottery or a Direction."""
    m = obj.probs if isinstance(obj, Lottery) else obj.delta
    return sum(
        (x * vx for row, vrow in zip(m, v.v) for x, vx in zip(row, vrow)),
        ZERO,
    )


def min_sdeu(d: Direction) -> Fraction:
    """Lower bound of U_v(d) over all normalized v, in closed form.

    Worst case puts all mass on one state and utility 1 on the favourable
    consequences there, so the bound is the minimum over states of
    d(s,1) plus the negative parts of d(s,c) for c >= 2.
    """
    return min(
        row[1] + sum((min(ZERO, x) for x in row[2:]), ZERO) for row in d.delta
    )


def max_sdeu(d: Direction) -> Fraction:
    return max(
        row[1] + sum((max(ZERO, x) for x in row[2:]), ZERO) for row in d.delta
    )


def dominates(d: Direction) -> bool:
    """True when U_v(d) >= 0 for every normalized v (closed-form test)."""
    return min_sdeu(d) >= 0


def in_negative_orthant(d: Direction) -> bool:
    """True when U_v(d) < 0 for every normalized v."""
    return all(
        row[1] + sum((max(ZERO, x) for x in row[2:]), ZERO) < 0 for row in d.delta
    )


def restrict(d: Direction, event: frozenset[int]) -> Direction:
    """Zero out rows off the event (the direction of XE vs YE)."""
    zero_row = (ZERO,) * len(d.delta[0])
    return Direction(
        tuple(row if s in event else zero_row for s, row in enumerate(d.delta))
    )


def is_constant_direction(d: Direction):
    """If all rows are equal, return the shared row, else None."""
    first = d.delta[0]
    if all(row == first for row in d.delta[1:]):
        return first
    return None
