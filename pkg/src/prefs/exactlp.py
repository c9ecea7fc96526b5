"""Exact rational linear programming.

A small two-phase primal simplex over ``fractions.Fraction`` with Bland's
anti-cycling rule.  Every number in and out is an exact rational; there are
no tolerances anywhere.  Infeasible problems come back with a Farkas
certificate, unbounded ones with an improving ray.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

LE = "<="
GE = ">="
EQ = "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction
    label: str = ""

    def holds(self, point: Sequence[Fraction]) -> bool:
        lhs = sum((a * x for a, x in zip(self.coeffs, point)), ZERO)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """min/max of objective·x subject to constraints; variables are free."""

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    sense: str = "min"

    def __post_init__(self):
        n = len(self.objective)
        for con in self.constraints:
            if len(con.coeffs) != n:
                raise ValueError("constraint/objective dimension mismatch")


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None
    # Farkas multipliers, one per constraint, for status == infeasible.
    # Each multiplier acts on the constraint rewritten in <= form
    # (>= rows are negated first); inequality multipliers are >= 0,
    # equality multipliers are free.
    certificate: Optional[tuple[Fraction, ...]] = None
    # improving direction for status == unbounded
    ray: Optional[tuple[Fraction, ...]] = None
    # dual multipliers per constraint (same <=-form convention) at an optimum
    duals: Optional[tuple[Fraction, ...]] = None


def constraint(coeffs, rel, rhs, label="") -> Constraint:
    return Constraint(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs), label)


def _as_le_rows(cons: Sequence[Constraint]):
    """Rewrite constraints as rows a·x <= b.

    Returns (rows, origin); origin[i] = (constraint index, sign), sign -1
    marking the negated member of an equality pair.  >= constraints
    contribute a single negated row with sign +1, so that multipliers on
    returned rows aggregate directly per constraint.
    """
    rows = []
    origin = []
    for idx, con in enumerate(cons):
        a, b = con.coeffs, con.rhs
        if con.rel == LE:
            rows.append((a, b))
            origin.append((idx, 1))
        elif con.rel == GE:
            rows.append((tuple(-c for c in a), -b))
            origin.append((idx, 1))
        else:
            rows.append((a, b))
            origin.append((idx, 1))
            rows.append((tuple(-c for c in a), -b))
            origin.append((idx, -1))
    return rows, origin


class _Tableau:
    """Dense simplex tableau over Fractions for A y <= b, y >= 0."""

    def __init__(self, rows, nvars):
        self.n = nvars
        self.m = len(rows)
        self.rowid = list(range(self.m))
        nslack = self.m
        self.T = []
        self.basis = []
        self.sigma = [1 if b >= 0 else -1 for _, b in rows]
        for i, (a, b) in enumerate(rows):
            sigma = self.sigma[i]
            row = [sigma * c for c in a] + [ZERO] * nslack + [sigma * b]
            row[self.n + i] = Fraction(sigma)
            self.T.append(row)
            self.basis.append(None)
        # attach artificial columns where the slack cannot start basic
        self.art = set()
        for i in range(self.m):
            if self.sigma[i] == 1:
                self.basis[i] = self.n + i
            else:
                col = len(self.T[i]) - 1
                for r in range(self.m):
                    self.T[r].insert(col, ONE if r == i else ZERO)
                self.basis[i] = col
                self.art.add(col)
        self.ncols = len(self.T[0]) - 1

    def rhs(self, i):
        return self.T[i][-1]

    def _pivot(self, r, c):
        piv = self.T[r][c]
        if piv != 1:
            self.T[r] = [x if not x else x / piv for x in self.T[r]]
        prow = self.T[r]
        for i in range(len(self.T)):
            if i != r and self.T[i][c]:
                f = self.T[i][c]
                self.T[i] = [
                    x if not y else x - f * y for x, y in zip(self.T[i], prow)
                ]
        self.basis[r] = c

    def reduced_costs(self, cost):
        z = ZERO
        zrow = list(cost[: self.ncols])
        for i, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb != 0:
                z += cb * self.rhs(i)
                row = self.T[i]
                for j in range(self.ncols):
                    if row[j]:
                        zrow[j] -= cb * row[j]
        return z, zrow

    def run(self, cost, banned):
        """Primal simplex with an incrementally maintained objective row.

        Entering column by most-negative reduced cost; after a streak of
        degenerate pivots the rule switches to Bland's (smallest index)
        until a nondegenerate pivot occurs, which prevents cycling.
        """
        basis_set = set(self.basis)
        _, zrow = self.reduced_costs(cost)
        degen = 0
        while True:
            enter = None
            if degen < 24:
                best = ZERO
                for j in range(self.ncols):
                    if j in banned or j in basis_set:
                        continue
                    if zrow[j] < best:
                        best, enter = zrow[j], j
            else:
                for j in range(self.ncols):
                    if j in banned or j in basis_set:
                        continue
                    if zrow[j] < 0:
                        enter = j
                        break
            if enter is None:
                return "optimal", self.reduced_costs(cost)[0]
            leave, ratio_best = None, None
            for i in range(len(self.T)):
                aij = self.T[i][enter]
                if aij > 0:
                    ratio = self.rhs(i) / aij
                    if (
                        ratio_best is None
                        or ratio < ratio_best
                        or (ratio == ratio_best and self.basis[i] < self.basis[leave])
                    ):
                        ratio_best, leave = ratio, i
            if leave is None:
                return "unbounded", enter
            degen = degen + 1 if ratio_best == 0 else 0
            basis_set.discard(self.basis[leave])
            basis_set.add(enter)
            self._pivot(leave, enter)
            f = zrow[enter]
            if f != 0:
                prow = self.T[leave]
                zrow = [
                    x if not y else x - f * y for x, y in zip(zrow, prow)
                ]

    def drop_redundant_rows(self):
        """Remove rows whose basic variable is an artificial stuck at zero."""
        keep_rows, keep_basis, keep_ids = [], [], []
        for i in range(len(self.T)):
            if self.basis[i] in self.art:
                cols = [
                    j
                    for j in range(self.ncols)
                    if j not in self.art and self.T[i][j] != 0
                ]
                if cols:
                    self._pivot(i, cols[0])
                else:
                    continue  # all-zero row: redundant, drop it
            keep_rows.append(self.T[i])
            keep_basis.append(self.basis[i])
            keep_ids.append(self.rowid[i])
        self.T, self.basis, self.rowid = keep_rows, keep_basis, keep_ids

    def row_duals(self, cost, nrows):
        """Multipliers per original <=-row (zero for dropped rows)."""
        _, zrow = self.reduced_costs(cost)
        duals = [ZERO] * nrows
        for i in self.rowid:
            slack = self.n + i
            duals[i] = cost[slack] - zrow[slack]
        return duals


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve an LP exactly.  Free variables are split internally."""
    n = len(lp.objective)
    sign = -1 if lp.sense == "max" else 1
    rows, origin = _as_le_rows(lp.constraints)
    nrows = len(rows)
    # y = (x+, x-), x = x+ - x-
    split_rows = [(tuple(list(a) + [-c for c in a]), b) for a, b in rows]
    tab = _Tableau(split_rows, 2 * n)

    if tab.art:
        cost1 = [ZERO] * (tab.ncols + 1)
        for a in tab.art:
            cost1[a] = ONE
        status, z = tab.run(cost1, banned=set())
        assert status == "optimal"
        if z > 0:
            u = tab.row_duals(cost1, nrows)
            cert = _aggregate(origin, [-ui for ui in u], len(lp.constraints))
            return LpOutcome(status=INFEASIBLE, certificate=cert)
        tab.drop_redundant_rows()

    cost2 = [ZERO] * (tab.ncols + 1)
    for j in range(n):
        cost2[j] = sign * lp.objective[j]
        cost2[n + j] = -sign * lp.objective[j]
    status, z = tab.run(cost2, banned=tab.art)
    if status == "unbounded":
        ray = _extract_ray(tab, z, n)
        return LpOutcome(status=UNBOUNDED, ray=ray)
    point = _extract_point(tab, n)
    u = tab.row_duals(cost2, nrows)
    if sign == -1:
        u = [-ui for ui in u]
    duals = _aggregate(origin, u, len(lp.constraints))
    value = sum((lp.objective[j] * point[j] for j in range(n)), ZERO)
    return LpOutcome(status=OPTIMAL, value=value, point=tuple(point), duals=duals)


def _aggregate(origin, row_mults, ncons):
    out = [ZERO] * ncons
    for (ci, sgn), w in zip(origin, row_mults):
        out[ci] += sgn * w
    return tuple(out)


def _extract_point(tab, n):
    y = [ZERO] * tab.ncols
    for i, bcol in enumerate(tab.basis):
        y[bcol] = tab.rhs(i)
    return [y[j] - y[n + j] for j in range(n)]


def _extract_ray(tab, enter_col, n):
    d = [ZERO] * tab.ncols
    d[enter_col] = ONE
    for i, bcol in enumerate(tab.basis):
        d[bcol] = -tab.T[i][enter_col]
    return tuple(d[j] - d[n + j] for j in range(n))


def verify_farkas(constraints: Sequence[Constraint], cert: Sequence[Fraction]) -> bool:
    """Exact check that cert proves infeasibility (see LpOutcome docs)."""
    if not constraints:
        return False
    n = len(constraints[0].coeffs)
    combo = [ZERO] * n
    total = ZERO
    for con, w in zip(constraints, cert):
        if con.rel != EQ and w < 0:
            return False
        a, b = con.coeffs, con.rhs
        if con.rel == GE:
            a, b = tuple(-c for c in a), -b
        for j in range(n):
            combo[j] += w * a[j]
        total += w * b
    return all(c == 0 for c in combo) and total < 0


def maximize_ratio(
    num: tuple[Sequence[Fraction], Fraction],
    den: tuple[Sequence[Fraction], Fraction],
    constraints: Sequence[Constraint],
    sense: str = "max",
) -> LpOutcome:
    """Optimize (num·x + n0)/(den·x + d0) over {x : constraints}.

    Standard homogenization: substitute y = t*x with den·y + d0*t = 1,
    t >= 0, and A y <= b t.  The denominator must be strictly positive on
    the (bounded) feasible set; the caller guarantees this.
    """
    ncoef, n0 = tuple(Fraction(c) for c in num[0]), Fraction(num[1])
    dcoef, d0 = tuple(Fraction(c) for c in den[0]), Fraction(den[1])
    n = len(ncoef)
    lifted = []
    for con in constraints:
        lifted.append(Constraint(con.coeffs + (-con.rhs,), con.rel, ZERO, con.label))
    lifted.append(constraint([0] * n + [1], GE, 0, "t>=0"))
    lifted.append(Constraint(tuple(dcoef) + (d0,), EQ, ONE, "den=1"))
    out = solve(LinearProgram(tuple(ncoef) + (n0,), tuple(lifted), sense=sense))
    if out.status != OPTIMAL:
        return out
    t = out.point[n]
    if t == 0:
        raise ValueError("denominator not bounded away from zero on feasible set")
    x = tuple(yj / t for yj in out.point[:n])
    return LpOutcome(status=OPTIMAL, value=out.value, point=x)
