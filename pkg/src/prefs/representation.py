"""Dual polytope of agreeing s.d.e.u. functions, and queries against it.

A preference basis is represented by the polytope of normalized s.d.e.u.
functions v satisfying U_v(X_n - Y_n) >= 0 for every basis preference.
Coherence, entailment and probability/utility bound queries are all exact
LPs over that polytope.  Free coordinates are v(s,c) for c >= 1
(v(s,0) = 0 always), laid out row-major: idx = s*(|C|-1) + (c-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import exactlp
from .algebra import LotteryExpr, eval_expr
from .exactlp import EQ, GE, LE, OPTIMAL, UNBOUNDED, Constraint, constraint
from .model import (
    Assessment,
    Direction,
    IncoherentAssessment,
    Lottery,
    NullEvent,
    Preference,
    PrefsError,
    SdeuFunction,
    Space,
    VPLUS,
    VPLUSPLUS,
    ZERO,
)
from .polytope import Polytope, fourier_motzkin

MODE_A5 = "a5"
MODE_A6 = "a6"


class NotNormalized(PrefsError):
    pass


def coord(space: Space, s: int, c: int) -> int:
    """Index of v(s,c), c >= 1, in the free-coordinate vector."""
    return s * (space.nc - 1) + (c - 1)


def free_dim(space: Space) -> int:
    return space.ns * (space.nc - 1)


def point_to_sdeu(point: Sequence[Fraction], space: Space, mode: str) -> SdeuFunction:
    v = tuple(
        (ZERO,) + tuple(point[coord(space, s, c)] for c in range(1, space.nc))
        for s in range(space.ns)
    )
    return SdeuFunction(v, VPLUSPLUS if mode == MODE_A6 else VPLUS)


def normalization_constraints(space: Space, mode: str) -> list[Constraint]:
    d = free_dim(space)
    rows: list[Constraint] = []

    def unit(i, k=Fraction(1)):
        row = [ZERO] * d
        row[i] = k
        return row

    total = [ZERO] * d
    for s in range(space.ns):
        total[coord(space, s, 1)] = Fraction(1)
    rows.append(constraint(total, EQ, 1, "norm:total"))

    if mode == MODE_A6:
        for s in range(space.ns):
            rows.append(constraint(unit(coord(space, s, 1)), GE, 0, f"norm:p{s}"))
            for c in range(2, space.nc):
                rows.append(
                    constraint(unit(coord(space, s, c)), GE, 0, f"norm:lo{s},{c}")
                )
                row = [ZERO] * d
                row[coord(space, s, 1)] = Fraction(1)
                row[coord(space, s, c)] = Fraction(-1)
                rows.append(constraint(row, GE, 0, f"norm:hi{s},{c}"))
    elif mode == MODE_A5:
        for c in range(2, space.nc):
            col = [ZERO] * d
            for s in range(space.ns):
                col[coord(space, s, c)] = Fraction(1)
            rows.append(constraint(col, GE, 0, f"norm:col-lo{c}"))
            rows.append(constraint(col, LE, 1, f"norm:col-hi{c}"))
    else:
        raise PrefsError(f"unknown mode {mode!r}")
    return rows


def direction_coeffs(d: Direction, space: Space) -> list[Fraction]:
    """Coefficient vector of U_v(d) over the free coordinates."""
    out = [ZERO] * free_dim(space)
    for s in range(space.ns):
        for c in range(1, space.nc):
            out[coord(space, s, c)] = d.delta[s][c]
    return out


@dataclass(frozen=True)
class DualSet:
    assessment: Assessment
    mode: str
    polytope: Polytope
    # constraints added on top of normalization + basis (A6 propagation etc.)
    extra: tuple[Constraint, ...] = ()

    @property
    def space(self) -> Space:
        return self.assessment.space

    def with_constraints(self, cons: Sequence[Constraint]) -> "DualSet":
        return DualSet(
            self.assessment,
            self.mode,
            self.polytope.with_constraints(cons),
            self.extra + tuple(cons),
        )


@dataclass(frozen=True)
class Bounds:
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_witness: Optional[SdeuFunction] = None
    upper_witness: Optional[SdeuFunction] = None


def basis_direction(pref: Preference, space: Space) -> Direction:
    return eval_expr(pref.lhs, space) - eval_expr(pref.rhs, space)


def build_dual(a: Assessment, mode: str = MODE_A6) -> DualSet:
    rows = normalization_constraints(a.space, mode)
    for n, pref in enumerate(a.basis):
        d = basis_direction(pref, a.space)
        rows.append(constraint(direction_coeffs(d, a.space), GE, 0, f"basis:{n}"))
    return DualSet(a, mode, Polytope(free_dim(a.space), tuple(rows)))


def is_coherent(d: DualSet) -> bool:
    return not d.polytope.is_empty()


def _require_coherent(d: DualSet) -> None:
    if d.polytope.is_empty():
        raise IncoherentAssessment("dual set is empty")


def _as_lottery(x: Union[Lottery, LotteryExpr], space: Space) -> Lottery:
    return x if isinstance(x, Lottery) else eval_expr(x, space)


def lottery_coeffs(x: Lottery, space: Space) -> list[Fraction]:
    out = [ZERO] * free_dim(space)
    for s in range(space.ns):
        for c in range(1, space.nc):
            out[coord(space, s, c)] = x.probs[s][c]
    return out


def direction_lower(d: DualSet, dirn: Direction) -> Optional[Fraction]:
    """min of U_v(dirn) over the dual set; None when unbounded below."""
    _require_coherent(d)
    out = d.polytope.minimize(direction_coeffs(dirn, d.space))
    if out.status == UNBOUNDED:
        return None
    return out.value


def entails(d: DualSet, x, y) -> bool:
    space = d.space
    lo = direction_lower(d, _as_lottery(x, space) - _as_lottery(y, space))
    return lo is not None and lo >= 0


def _bound(d: DualSet, obj: list[Fraction], sense: str):
    """One-sided bound with a lexicographically smallest optimal witness."""
    if sense == "min":
        out = d.polytope.minimize(obj)
    else:
        out = d.polytope.maximize(obj)
    if out.status == UNBOUNDED:
        return None, None
    if out.status != OPTIMAL:
        raise IncoherentAssessment("dual set is empty")
    res = (
        d.polytope.argmin_vertex(obj) if sense == "min" else d.polytope.argmax_vertex(obj)
    )
    witness = None
    if res is not None and res[1] is not None:
        witness = point_to_sdeu(res[1], d.space, d.mode)
    return out.value, witness


def eu_bounds(d: DualSet, x) -> Bounds:
    _require_coherent(d)
    obj = lottery_coeffs(_as_lottery(x, d.space), d.space)
    lo, lw = _bound(d, obj, "min")
    hi, uw = _bound(d, obj, "max")
    return Bounds(lo, hi, lw, uw)


def event_coeffs(e: frozenset[int], space: Space) -> list[Fraction]:
    out = [ZERO] * free_dim(space)
    for s in e:
        out[coord(space, s, 1)] = Fraction(1)
    return out


def prob_bounds(d: DualSet, e: frozenset[int]) -> Bounds:
    _require_coherent(d)
    obj = event_coeffs(e, d.space)
    lo, lw = _bound(d, obj, "min")
    hi, uw = _bound(d, obj, "max")
    return Bounds(lo, hi, lw, uw)


def is_potentially_null(d: DualSet, e: frozenset[int]) -> bool:
    _require_coherent(d)
    out = d.polytope.minimize(event_coeffs(e, d.space))
    return out.status != OPTIMAL or out.value == 0


def conditional_eu_bounds(d: DualSet, x, e: frozenset[int]) -> Bounds:
    """Bounds of U_v(XE)/p_v(E); linear-fractional, solved exactly."""
    _require_coherent(d)
    if is_potentially_null(d, e):
        raise NullEvent("conditioning event has lower probability 0")
    space = d.space
    x = _as_lottery(x, space)
    num = [ZERO] * free_dim(space)
    for s in e:
        for c in range(1, space.nc):
            num[coord(space, s, c)] = x.probs[s][c]
    den = event_coeffs(e, space)
    results = {}
    for sense in ("min", "max"):
        out = exactlp.maximize_ratio(
            (num, ZERO), (den, ZERO), d.polytope.constraints, sense=sense
        )
        if out.status != OPTIMAL:
            raise PrefsError(f"conditional bound LP returned {out.status}")
        witness = point_to_sdeu(out.point, space, d.mode) if out.point else None
        results[sense] = (out.value, witness)
    return Bounds(
        results["min"][0], results["max"][0], results["min"][1], results["max"][1]
    )


def _uniform_lottery(space: Space) -> tuple[tuple[Fraction, ...], ...]:
    w = Fraction(1, space.nc)
    return tuple((w,) * space.nc for _ in range(space.ns))


def basis_from_credal(vs: Sequence[SdeuFunction], space: Space) -> Assessment:
    """A finite basis whose dual set is exactly conv(vs).

    Facets of the hull are found by eliminating the hull coefficients with
    Fourier-Motzkin; each facet a.v >= beta becomes a lottery difference
    (using U_v(H1 - H0) = 1 to absorb the constant) and is rescaled around
    the uniform lottery to make both sides valid lotteries.
    """
    from .algebra import MatrixExpr

    if not vs:
        raise NotNormalized("need at least one s.d.e.u. function")
    d = free_dim(space)
    m = len(vs)
    points = []
    for fn in vs:
        if len(fn.v) != space.ns or len(fn.v[0]) != space.nc:
            raise NotNormalized("s.d.e.u. function has wrong shape for space")
        points.append(
            tuple(fn.v[s][c] for s in range(space.ns) for c in range(1, space.nc))
        )
    # variables: (v_0..v_{d-1}, lam_0..lam_{m-1}); fourier_motzkin wants
    # rows in "coeffs . x <= rhs" form, so GE rows are negated on entry.
    total = d + m
    rows = []

    def ge_row(coeffs, rhs):
        rows.append((tuple(-x for x in coeffs), Fraction(-rhs)))

    for i in range(d):
        row = [ZERO] * total
        row[i] = Fraction(1)
        for j, pt in enumerate(points):
            row[d + j] = -pt[i]
        ge_row(row, 0)
        ge_row([-x for x in row], 0)
    for j in range(m):
        row = [ZERO] * total
        row[d + j] = Fraction(1)
        ge_row(row, 0)
    srow = [ZERO] * total
    for j in range(m):
        srow[d + j] = Fraction(1)
    ge_row(srow, 1)
    ge_row([-x for x in srow], -1)

    facets = fourier_motzkin(rows, list(range(d, total)), total)

    base = _uniform_lottery(space)
    prefs = []
    for le_coeffs, le_rhs in facets:
        # facet back in "a . v >= beta" orientation
        a = tuple(-x for x in le_coeffs[:d])
        beta = -le_rhs
        if all(x == 0 for x in a):
            continue
        # direction with U_v(dir) = a.v - beta for every normalized v
        delta = []
        for s in range(space.ns):
            row = [ZERO] * space.nc
            for c in range(1, space.nc):
                row[c] = a[coord(space, s, c)]
            row[1] -= beta
            row[0] = -sum(row[1:], ZERO)
            delta.append(row)
        biggest = max((abs(x) for row in delta for x in row), default=ZERO)
        if biggest == 0:
            continue
        eps = Fraction(1, 2) / (space.nc * biggest)
        lhs = tuple(
            tuple(b + eps * dx for b, dx in zip(brow, drow))
            for brow, drow in zip(base, delta)
        )
        prefs.append(Preference(MatrixExpr(lhs), MatrixExpr(base)))
    return Assessment(space, tuple(prefs))
