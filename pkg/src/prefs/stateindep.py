"""State-independent representations: conditional-constant propagation,
utility pinning, and search for agreeing probability/utility pairs.

The dual polytope constrains state-dependent utilities only.  Propagation
finds entailed preferences between conditional constant lotteries and
extends them to every conditioning event; pinning then forces each
consequence's utility to its greatest entailed lower bound, which drives
the polytope toward product form.  Bilinear bounds over the (nonconvex)
pair region are computed by a utility grid plus alternating LPs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlp
from .exactlp import EQ, GE, OPTIMAL, Constraint, LinearProgram, constraint
from .model import (
    Assessment,
    Direction,
    IncoherentAssessment,
    Lottery,
    PrefsError,
    ProbUtilityPair,
    SdeuFunction,
    Space,
    ZERO,
    sdeu_as_pair,
    try_sdeu_as_pair,
)
from .polytope import extreme_rays
from .representation import (
    Bounds,
    DualSet,
    MODE_A6,
    basis_direction,
    build_dual,
    coord,
    direction_coeffs,
    event_coeffs,
    free_dim,
    point_to_sdeu,
)

ONE = Fraction(1)


class IncoherentAfterPropagation(PrefsError):
    pass


class PinBrokeCoherence(PrefsError):
    pass


class NoAgreeingPair(PrefsError):
    pass


@dataclass(frozen=True)
class CondConstant:
    event: frozenset[int]
    b: tuple[Fraction, ...]  # the constant row, length |C|, zero sum
    gamma: tuple[tuple[str, Fraction], ...]  # dual certificate of entailment

    def conditional_direction(self, space: Space) -> Direction:
        zero = (ZERO,) * space.nc
        return Direction(
            tuple(self.b if s in self.event else zero for s in range(space.ns))
        )


@dataclass(frozen=True)
class PropagationResult:
    dual: DualSet
    rounds: int
    fixpoint: bool


def all_events(space: Space):
    for k in range(1, space.ns + 1):
        for combo in itertools.combinations(range(space.ns), k):
            yield frozenset(combo)


def _row_min(b: Sequence[Fraction]) -> Fraction:
    """[b]_min of a single constant row (all states identical)."""
    return b[1] + sum((min(ZERO, x) for x in b[2:]), ZERO)


def _conditional_constants_for(
    d: DualSet, e: frozenset[int]
) -> list[tuple[Fraction, ...]]:
    """Generators of the cone of constant rows b with E.b entailed.

    U_v(E.b) depends on v only through q_c = sum_{s in E} v(s,c), so
    the entailed rows are exactly the polar of the cone spanned by the
    projections of the dual polytope's vertices.
    """
    space = d.space
    k = space.nc - 1
    points = set()
    for vtx in d.polytope.vertices():
        points.add(
            tuple(
                sum((vtx[coord(space, s, c)] for s in e), ZERO)
                for c in range(1, space.nc)
            )
        )
    rays, lineality = extreme_rays(sorted(points), k)
    gens = list(rays)
    for l in lineality:
        gens.append(l)
        gens.append(tuple(-x for x in l))
    rows = []
    for g in gens:
        full = (-sum(g, ZERO),) + tuple(g)
        rows.append(full)
    return rows


def find_cond_constants(d: DualSet, informative_only: bool = True) -> list[CondConstant]:
    """Entailed conditionally constant directions E.b of the dual set.

    Only events that are not potentially null can trigger A6, and rows
    with [b]_min >= 0 are dominance-trivial, so both are filtered by
    default.  The gamma certificate is the dual of the entailment LP.
    """
    if d.mode != MODE_A6:
        raise PrefsError("conditional-constant search requires A6 normalization")
    if d.polytope.is_empty():
        raise IncoherentAssessment("dual set is empty")
    out = []
    for e in all_events(d.space):
        lo = d.polytope.minimize(event_coeffs(e, d.space))
        if lo.status != OPTIMAL or lo.value == 0:
            continue  # potentially null
        for b in _conditional_constants_for(d, e):
            if informative_only and _row_min(b) >= 0:
                continue
            cc = CondConstant(e, b, ())
            dirn = cc.conditional_direction(d.space)
            check = d.polytope.minimize(direction_coeffs(dirn, d.space))
            if check.status != OPTIMAL or check.value < 0:
                continue  # numerical cone boundary artifact; must not happen
            gamma = tuple(
                (con.label, mult)
                for con, mult in zip(d.polytope.constraints, check.duals or ())
                if mult != 0
            )
            out.append(CondConstant(e, b, gamma))
    return out


def _per_state_constraints(
    cc: CondConstant, space: Space
) -> list[Constraint]:
    rows = []
    for s in range(space.ns):
        coeffs = [ZERO] * free_dim(space)
        for c in range(1, space.nc):
            coeffs[coord(space, s, c)] = cc.b[c]
        rows.append(constraint(coeffs, GE, 0, f"a6:{sorted(cc.event)}:{s}"))
    return rows


def _prune_extra(base: DualSet, extra: list[Constraint]) -> list[Constraint]:
    """Drop propagated rows implied by the rest (each tightening round
    supersedes the previous one, so old rows pile up as dead weight)."""
    kept = list(extra)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        poly = base.polytope.with_constraints(others)
        lo = poly.minimize(kept[i].coeffs)
        if lo.status == OPTIMAL and lo.value >= kept[i].rhs:
            kept.pop(i)
        else:
            i += 1
    return kept


def a6_propagate(d: DualSet, max_rounds: int = 8) -> PropagationResult:
    """Close the dual set under A6, adding per-state constraints for every
    entailed conditional constant until nothing cuts or the cap is hit.

    Convergence can be asymptotic (successive tightenings approach a
    limit without reaching it), hence the round cap; truncation is sound,
    it only leaves the set larger than the full closure.
    """
    current = d
    extra: list[Constraint] = []
    for rnd in range(max_rounds):
        if current.polytope.is_empty():
            raise IncoherentAfterPropagation(
                "A6 propagation emptied the dual set"
            )
        cutting = []
        for cc in find_cond_constants(current):
            for con in _per_state_constraints(cc, d.space):
                lo = current.polytope.minimize(con.coeffs)
                if lo.status == OPTIMAL and lo.value < 0:
                    cutting.append(con)
        if not cutting:
            return PropagationResult(current, rnd, True)
        extra = _prune_extra(d, extra + cutting)
        current = d.with_constraints(extra)
    if current.polytope.is_empty():
        raise IncoherentAfterPropagation("A6 propagation emptied the dual set")
    return PropagationResult(current, max_rounds, False)


def greatest_lower_utility(d: DualSet, c: int) -> Fraction:
    """max u with H_c entailed to be at least H_u: min of sum_s v(s,c)."""
    if c < 2:
        raise PrefsError("greatest lower utility applies to consequences c >= 2")
    obj = [ZERO] * free_dim(d.space)
    for s in range(d.space.ns):
        obj[coord(d.space, s, c)] = ONE
    out = d.polytope.minimize(obj)
    if out.status != OPTIMAL:
        raise IncoherentAssessment("dual set is empty")
    return out.value


def pin_consequence(d: DualSet, c: int) -> DualSet:
    """Force consequence c state-independent at its greatest lower utility."""
    t = greatest_lower_utility(d, c)
    cons = []
    for s in range(d.space.ns):
        coeffs = [ZERO] * free_dim(d.space)
        coeffs[coord(d.space, s, c)] = ONE
        coeffs[coord(d.space, s, 1)] = -t
        cons.append(constraint(coeffs, EQ, 0, f"pin:{c}:{s}"))
    pinned = d.with_constraints(cons)
    if pinned.polytope.is_empty():
        raise PinBrokeCoherence(f"pinning consequence {c} at {t} emptied the set")
    return pinned


def _pair_lp_constraints(
    a: Assessment, u: Sequence[Fraction]
) -> list[Constraint]:
    """Basis constraints as LPs in p for a fixed state-independent u."""
    space = a.space
    cons = []
    for n, pref in enumerate(a.basis):
        dirn = basis_direction(pref, space)
        coeffs = [
            sum((u[c] * dirn.delta[s][c] for c in range(space.nc)), ZERO)
            for s in range(space.ns)
        ]
        cons.append(constraint(coeffs, GE, 0, f"basis:{n}"))
    cons.append(constraint([ONE] * space.ns, EQ, 1, "simplex"))
    for s in range(space.ns):
        unit = [ZERO] * space.ns
        unit[s] = ONE
        cons.append(constraint(unit, GE, 0, f"p{s}"))
    return cons


def _utility_lp_constraints(
    a: Assessment, p: Sequence[Fraction]
) -> list[Constraint]:
    """Basis constraints as LPs in (u_2..u_K) for a fixed p."""
    space = a.space
    k = space.nc - 2
    cons = []
    for n, pref in enumerate(a.basis):
        dirn = basis_direction(pref, space)
        coeffs = [
            sum((p[s] * dirn.delta[s][c] for s in range(space.ns)), ZERO)
            for c in range(2, space.nc)
        ]
        const = sum((p[s] * dirn.delta[s][1] for s in range(space.ns)), ZERO)
        cons.append(constraint(coeffs, GE, -const, f"basis:{n}"))
    for j in range(k):
        unit = [ZERO] * k
        unit[j] = ONE
        cons.append(constraint(unit, GE, 0, f"u-lo{j}"))
        cons.append(constraint(unit, exactlp.LE, 1, f"u-hi{j}"))
    return cons


def _pair_from_point(p: Sequence[Fraction], u: Sequence[Fraction]) -> ProbUtilityPair:
    return ProbUtilityPair(tuple(p), (ZERO, ONE) + tuple(u))


def pair_satisfies(a: Assessment, pair: ProbUtilityPair) -> bool:
    space = a.space
    for pref in a.basis:
        dirn = basis_direction(pref, space)
        val = sum(
            (
                pair.p[s] * pair.u[c] * dirn.delta[s][c]
                for s in range(space.ns)
                for c in range(space.nc)
            ),
            ZERO,
        )
        if val < 0:
            return False
    return True


def _grid_values(step: int):
    return [Fraction(i, step) for i in range(step + 1)]


def _grid_pair_search(a: Assessment, step: int = 100) -> Optional[ProbUtilityPair]:
    space = a.space
    k = space.nc - 2
    grid = _grid_values(step)
    for u_tail in itertools.product(grid, repeat=k):
        u = (ZERO, ONE) + tuple(u_tail)
        cons = _pair_lp_constraints(a, u)
        lp = LinearProgram(tuple([ZERO] * space.ns), tuple(cons))
        out = exactlp.solve(lp)
        if out.status == OPTIMAL:
            return _pair_from_point(out.point, u_tail)
    return None


def _product_vertex(d: DualSet) -> Optional[ProbUtilityPair]:
    """Lexicographically smallest dual vertex that is a product pair."""
    best = None
    for vtx in sorted(d.polytope.vertices()):
        pair = try_sdeu_as_pair(point_to_sdeu(vtx, d.space, MODE_A6))
        if pair is not None:
            best = pair
            break
    return best


def find_agreeing_pair(a: Assessment, max_rounds: int = 8) -> ProbUtilityPair:
    """A probability/utility pair agreeing with the basis.

    Strategy: A6-propagate, then pin consequences in index order; if the
    propagated set was truncated short of its fixpoint the pins can empty
    it even though a pair exists, so fall back to scanning dual vertices
    for product form, and finally to a utility grid.  Raises
    NoAgreeingPair when the propagation itself empties the set, or when
    every route is exhausted.
    """
    space = a.space
    d = build_dual(a, MODE_A6)
    if d.polytope.is_empty():
        raise NoAgreeingPair("dual set is empty at the A5 level")
    try:
        prop = a6_propagate(d, max_rounds)
    except IncoherentAfterPropagation:
        raise NoAgreeingPair("A6 propagation emptied the dual set") from None

    if space.nc == 2:
        vtx = prop.dual.polytope.lexmin_point()
        return _pair_from_point(
            [vtx[coord(space, s, 1)] for s in range(space.ns)], ()
        )

    try:
        cur = prop.dual
        for c in range(2, space.nc):
            cur = pin_consequence(cur, c)
        pair = _product_vertex(cur)
        if pair is not None and pair_satisfies(a, pair):
            return pair
    except PinBrokeCoherence:
        pass

    pair = _product_vertex(prop.dual)
    if pair is not None and pair_satisfies(a, pair):
        return pair

    pair = _grid_pair_search(a)
    if pair is not None:
        return pair
    raise NoAgreeingPair("no agreeing probability/utility pair found")


@dataclass(frozen=True)
class PairBounds:
    lower: Fraction
    upper: Fraction
    lower_witness: ProbUtilityPair
    upper_witness: ProbUtilityPair


def _pair_value(pair: ProbUtilityPair, x: Lottery, space: Space) -> Fraction:
    return sum(
        (
            pair.p[s] * pair.u[c] * x.probs[s][c]
            for s in range(space.ns)
            for c in range(space.nc)
        ),
        ZERO,
    )


def _lottery_pair_objective(x: Lottery, u: Sequence[Fraction], space: Space):
    """Coefficients of U_{p(x)u}(x) as a function of p for fixed u."""
    return [
        sum((u[c] * x.probs[s][c] for c in range(space.nc)), ZERO)
        for s in range(space.ns)
    ]


def _alternate(
    a: Assessment, x: Lottery, p, u_tail, sense: str, cap: int = 60
):
    """Alternating LPs: optimize p for fixed u, then u for fixed p."""
    space = a.space
    best = None
    for _ in range(cap):
        u = (ZERO, ONE) + tuple(u_tail)
        obj = _lottery_pair_objective(x, u, space)
        lp = LinearProgram(
            tuple(obj), tuple(_pair_lp_constraints(a, u)), sense=sense
        )
        out = exactlp.solve(lp)
        if out.status != OPTIMAL:
            break
        p = out.point[: space.ns]
        uobj = [
            sum((p[s] * x.probs[s][c] for s in range(space.ns)), ZERO)
            for c in range(2, space.nc)
        ]
        lp2 = LinearProgram(
            tuple(uobj), tuple(_utility_lp_constraints(a, p)), sense=sense
        )
        out2 = exactlp.solve(lp2)
        if out2.status != OPTIMAL:
            break
        u_tail = tuple(out2.point[: space.nc - 2])
        val = _pair_value(_pair_from_point(p, u_tail), x, space)
        if best is not None and val == best[0]:
            break
        best = (val, _pair_from_point(p, u_tail))
    return best


def pair_eu_bounds(
    a: Assessment, x: Lottery, step: int = 100, refine_top: int = 5
) -> PairBounds:
    """Bounds of U_v(x) over all agreeing probability/utility pairs.

    The region is nonconvex, so this is a grid-plus-refinement estimate:
    the returned values are exact evaluations at verified feasible
    witness pairs (certified one-sided bounds, not global optima).
    """
    space = a.space
    k = space.nc - 2
    grid = _grid_values(step)
    cells: dict[str, list] = {"min": [], "max": []}
    for u_tail in itertools.product(grid, repeat=k):
        u = (ZERO, ONE) + tuple(u_tail)
        cons = _pair_lp_constraints(a, u)
        obj = _lottery_pair_objective(x, u, space)
        for sense in ("min", "max"):
            out = exactlp.solve(LinearProgram(tuple(obj), tuple(cons), sense=sense))
            if out.status == OPTIMAL:
                cells[sense].append((out.value, out.point[: space.ns], u_tail))
    if not cells["min"]:
        raise NoAgreeingPair("utility grid found no agreeing pair")

    results = {}
    for sense in ("min", "max"):
        ranked = sorted(
            cells[sense], key=lambda t: t[0], reverse=(sense == "max")
        )
        best_val, best_p, best_u = ranked[0]
        best_pair = _pair_from_point(best_p, best_u)
        for _, p0, u0 in ranked[:refine_top]:
            got = _alternate(a, x, p0, u0, sense)
            if got is None:
                continue
            val, pair = got
            better = val < best_val if sense == "min" else val > best_val
            if better and pair_satisfies(a, pair):
                best_val, best_pair = val, pair
        results[sense] = (best_val, best_pair)
    lo, lw = results["min"]
    hi, uw = results["max"]
    return PairBounds(lo, hi, lw, uw)
