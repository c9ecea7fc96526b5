"""Strong state-independence as a closure operator, and preclusion.

A closure round scans the current pool of preferred directions for pairs
witnessing a conditional constant increment (two directions whose scaled
difference is E.b with b constant on a not-potentially-null event E) and
adds, for every other singleton event F, the direction B' + (p/q) F.b,
where p is the exact lower probability of E and q the exact upper
probability of F on the current closure.  Probabilities are recomputed
each round, so later rounds strengthen earlier ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exactlp import GE, OPTIMAL, constraint
from .model import (
    Assessment,
    Direction,
    Lottery,
    PrefsError,
    ProbUtilityPair,
    Space,
    ZERO,
)
from .representation import (
    Bounds,
    DualSet,
    MODE_A5,
    MODE_A6,
    basis_direction,
    build_dual,
    direction_coeffs,
    event_coeffs,
)
from .stateindep import (
    NoAgreeingPair,
    PairBounds,
    all_events,
    find_agreeing_pair,
    pair_eu_bounds,
)


class IncoherentClosure(PrefsError):
    pass


@dataclass(frozen=True)
class Addition:
    direction: Direction
    base_index: int  # pool index of B'
    event: frozenset[int]  # E of the increment
    b: tuple[Fraction, ...]  # the constant row
    f_event: frozenset[int]  # F of the new mixture
    p: Fraction  # lower probability of E
    q: Fraction  # upper probability of F


@dataclass(frozen=True)
class ClosureState:
    assessment: Assessment
    dual: DualSet
    pool: tuple[Direction, ...]
    added: tuple[Addition, ...] = ()

    @property
    def space(self) -> Space:
        return self.assessment.space


def new_closure(a: Assessment) -> ClosureState:
    d = build_dual(a, MODE_A6)
    if d.polytope.is_empty():
        raise IncoherentClosure("dual set is empty at the A5 level")
    pool = tuple(
        basis_direction(p, a.space) for p in a.basis
    )
    return ClosureState(a, d, pool)


def _match_increment(
    dm: Direction, dn: Direction, e: frozenset[int], space: Space
) -> Optional[tuple[Fraction, tuple[Fraction, ...]]]:
    """Find alpha > 0 with alpha*dm = dn + E.b, b constant on e.

    alpha is pinned by the rows off e (which must match exactly up to
    scale); when every off-event row is zero alpha defaults to 1.
    """
    alpha = None
    for s in range(space.ns):
        if s in e:
            continue
        for c in range(space.nc):
            x, y = dm.delta[s][c], dn.delta[s][c]
            if x == 0:
                if y != 0:
                    return None
            else:
                r = y / x
                if alpha is None:
                    alpha = r
                elif alpha != r:
                    return None
    if alpha is None:
        alpha = Fraction(1)
    if alpha <= 0:
        return None
    rows = [
        tuple(alpha * dm.delta[s][c] - dn.delta[s][c] for c in range(space.nc))
        for s in sorted(e)
    ]
    if any(row != rows[0] for row in rows):
        return None
    b = rows[0]
    if all(x == 0 for x in b):
        return None
    return alpha, b


def _detect_increments(cs: ClosureState) -> list[tuple[int, frozenset[int], tuple]]:
    """(pool index of B', E, b) for every increment the pool witnesses."""
    space = cs.space
    events = list(all_events(space))
    seen = set()
    found = []
    for m, n in itertools.permutations(range(len(cs.pool)), 2):
        for e in events:
            got = _match_increment(cs.pool[m], cs.pool[n], e, space)
            if got is None:
                continue
            _, b = got
            key = (n, e, b)
            if key not in seen:
                seen.add(key)
                found.append((n, e, b))
    return found


def _scaled_mix(
    base: Direction, k: Fraction, row: tuple[Fraction, ...], f: frozenset[int],
    space: Space,
) -> Direction:
    return Direction(
        tuple(
            tuple(
                base.delta[s][c] + (k * row[c] if s in f else ZERO)
                for c in range(space.nc)
            )
            for s in range(space.ns)
        )
    )


def a6star_round(cs: ClosureState) -> ClosureState:
    """One closure round; pool and polytope grow, never shrink."""
    space = cs.space
    if cs.dual.polytope.is_empty():
        raise IncoherentClosure("closure polytope is empty")
    lower_prob: dict[frozenset[int], Optional[Fraction]] = {}
    upper_prob: dict[frozenset[int], Fraction] = {}

    def lower(e):
        if e not in lower_prob:
            out = cs.dual.polytope.minimize(event_coeffs(e, space))
            lower_prob[e] = out.value if out.status == OPTIMAL else None
        return lower_prob[e]

    def upper(e):
        if e not in upper_prob:
            upper_prob[e] = cs.dual.polytope.maximize(event_coeffs(e, space)).value
        return upper_prob[e]

    additions = []
    cons = []
    for n, e, b in _detect_increments(cs):
        p = lower(e)
        if p is None or p <= 0:
            continue  # potentially null event cannot trigger the axiom
        for s in range(space.ns):
            f = frozenset([s])
            if f == e:
                continue
            q = upper(f)
            if q <= 0:
                continue
            dirn = _scaled_mix(cs.pool[n], p / q, b, f, space)
            coeffs = direction_coeffs(dirn, space)
            cut = cs.dual.polytope.minimize(coeffs)
            if cut.status == OPTIMAL and cut.value >= 0:
                continue  # already entailed; adding it would be a no-op
            additions.append(Addition(dirn, n, e, b, f, p, q))
            cons.append(constraint(coeffs, GE, 0, f"a6star:{len(cons)}"))
    if not additions:
        return cs
    dual = cs.dual.with_constraints(cons)
    if dual.polytope.is_empty():
        raise IncoherentClosure("strong state-independence emptied the dual set")
    return ClosureState(
        cs.assessment,
        dual,
        cs.pool + tuple(a.direction for a in additions),
        cs.added + tuple(additions),
    )


def iterate_closure(
    a: Assessment, rounds: int
) -> ClosureState:
    cs = new_closure(a)
    for _ in range(rounds):
        nxt = a6star_round(cs)
        if nxt is cs:
            break
        cs = nxt
    return cs


def theorem4_eu_bounds(a: Assessment, x: Lottery) -> PairBounds:
    """Bounds over the convex hull of agreeing pairs (the A6* limit)."""
    find_agreeing_pair(a)  # raises NoAgreeingPair when the region is empty
    return pair_eu_bounds(a, x)


@dataclass(frozen=True)
class PreclusionVerdict:
    level: str  # "a5" or "a6"
    precluded: bool
    # Farkas certificate (A5 level) as (label, multiplier) pairs, or the
    # string "no-agreeing-pair" at the A6 level
    certificate: Union[tuple, str, None]


def is_precluded(a: Assessment, x, y, level: str) -> PreclusionVerdict:
    """Would asserting x >= y break coherence at the given level?"""
    from .algebra import MatrixExpr
    from .representation import _as_lottery

    space = a.space
    xl, yl = _as_lottery(x, space), _as_lottery(y, space)
    extended = a.extended(
        Preference(MatrixExpr(xl.probs), MatrixExpr(yl.probs))
    )
    if level == MODE_A5:
        d = build_dual(extended, MODE_A5)
        if d.polytope.is_empty():
            cert = d.polytope.infeasibility_certificate()
            labelled = tuple(
                (con.label, mult)
                for con, mult in zip(d.polytope.constraints, cert or ())
                if mult != 0
            )
            return PreclusionVerdict(MODE_A5, True, labelled)
        return PreclusionVerdict(MODE_A5, False, None)
    if level == MODE_A6:
        try:
            find_agreeing_pair(extended)
            return PreclusionVerdict(MODE_A6, False, None)
        except NoAgreeingPair:
            return PreclusionVerdict(MODE_A6, True, "no-agreeing-pair")
    raise PrefsError(f"unknown preclusion level {level!r}")


from .model import Preference  # noqa: E402  (cycle-free tail import)
