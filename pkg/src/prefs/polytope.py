"""Exact polytopes: feasibility, optimization, vertex enumeration.

Vertices are enumerated by double description: start from a bounding box
in V-representation and insert the halfspaces one at a time, generating
new vertices on edges between kept and cut vertices.  Adjacency of two
vertices is decided exactly by the rank of their common tight constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import exactlp
from .exactlp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    ONE,
    OPTIMAL,
    UNBOUNDED,
    ZERO,
    Constraint,
    LinearProgram,
    LpOutcome,
    constraint,
)

Point = tuple[Fraction, ...]


def _rank(rows: Sequence[Sequence[Fraction]]) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    while rank < len(mat) and col < ncols:
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / prow[col]
                mat[i] = [x - f * y for x, y in zip(mat[i], prow)]
        rank += 1
        col += 1
    return rank


def nullspace(rows: Sequence[Sequence[Fraction]], dim: int) -> list[Point]:
    """Exact basis of {x : rows·x = 0}."""
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        mat[rank] = [x / prow[col] for x in prow]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * dim
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(tuple(vec))
    return basis


@dataclass(frozen=True)
class Polytope:
    """H-polytope over exact rationals; vertex list computed on demand."""

    dim: int
    constraints: tuple[Constraint, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def with_constraints(self, extra: Iterable[Constraint]) -> "Polytope":
        return Polytope(self.dim, self.constraints + tuple(extra))

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(con.holds(point) for con in self.constraints)

    def minimize(self, obj: Sequence[Fraction]) -> LpOutcome:
        return exactlp.solve(
            LinearProgram(tuple(Fraction(c) for c in obj), self.constraints)
        )

    def maximize(self, obj: Sequence[Fraction]) -> LpOutcome:
        return exactlp.solve(
            LinearProgram(tuple(Fraction(c) for c in obj), self.constraints, "max")
        )

    def feasible_point(self) -> Optional[Point]:
        out = self.minimize([ZERO] * self.dim)
        return out.point if out.status == OPTIMAL else None

    def is_empty(self) -> bool:
        return self.feasible_point() is None

    def infeasibility_certificate(self) -> Optional[tuple[Fraction, ...]]:
        out = self.minimize([ZERO] * self.dim)
        return out.certificate if out.status == INFEASIBLE else None

    def lexmin_point(self, extra: Iterable[Constraint] = ()) -> Optional[Point]:
        """Lexicographically smallest feasible point (assumes boundedness)."""
        cons = list(self.constraints) + list(extra)
        fixed: list[Fraction] = []
        for j in range(self.dim):
            obj = [ZERO] * self.dim
            obj[j] = ONE
            out = exactlp.solve(LinearProgram(tuple(obj), tuple(cons)))
            if out.status != OPTIMAL:
                return None
            fixed.append(out.value)
            row = [ZERO] * self.dim
            row[j] = ONE
            cons.append(Constraint(tuple(row), EQ, out.value))
        return tuple(fixed)

    def argmin_vertex(self, obj: Sequence[Fraction]) -> Optional[tuple[Fraction, Point]]:
        """(optimal value, lexicographically smallest optimal vertex)."""
        out = self.minimize(obj)
        if out.status != OPTIMAL:
            return None
        face = Constraint(tuple(Fraction(c) for c in obj), EQ, out.value)
        return out.value, self.lexmin_point([face])

    def argmax_vertex(self, obj: Sequence[Fraction]) -> Optional[tuple[Fraction, Point]]:
        res = self.argmin_vertex([-Fraction(c) for c in obj])
        if res is None:
            return None
        return -res[0], res[1]

    def bounding_box(self) -> Optional[list[tuple[Fraction, Fraction]]]:
        """Exact per-coordinate bounds; None if empty.

        Raises ValueError if the polytope is unbounded.
        """
        box = []
        for j in range(self.dim):
            obj = [ZERO] * self.dim
            obj[j] = ONE
            lo = self.minimize(obj)
            if lo.status == INFEASIBLE:
                return None
            hi = self.maximize(obj)
            if lo.status == UNBOUNDED or hi.status == UNBOUNDED:
                raise ValueError("polytope is unbounded; cannot enumerate vertices")
            box.append((lo.value, hi.value))
        return box

    def vertices(self) -> list[Point]:
        if "verts" not in self._cache:
            self._cache["verts"] = enumerate_vertices(self)
        return self._cache["verts"]


def enumerate_vertices(poly: Polytope) -> list[Point]:
    """Exact, duplicate-free vertex list; empty iff infeasible."""
    box = poly.bounding_box()
    if box is None:
        return []
    d = poly.dim
    # widen by 1 so that no true vertex needs the box to be tight unless the
    # polytope itself makes it so
    rows: list[tuple[Point, Fraction]] = []
    for j in range(d):
        lo, hi = box[j][0] - 1, box[j][1] + 1
        e = [ZERO] * d
        e[j] = ONE
        rows.append((tuple(e), hi))
        e = [ZERO] * d
        e[j] = -ONE
        rows.append((tuple(e), -lo))
    cuts: list[tuple[Point, Fraction]] = []
    for con in poly.constraints:
        a, b = con.coeffs, con.rhs
        if con.rel in (LE, EQ):
            cuts.append((a, b))
        if con.rel in (GE, EQ):
            cuts.append((tuple(-c for c in a), -b))

    # start from the widened box corners
    verts: list[Point] = []
    for mask in range(1 << d):
        v = []
        for j in range(d):
            lo, hi = box[j][0] - 1, box[j][1] + 1
            v.append(hi if (mask >> j) & 1 else lo)
        verts.append(tuple(v))

    processed = list(rows)
    for a, b in cuts:
        vals = [sum((ai * xi for ai, xi in zip(a, v)), ZERO) - b for v in verts]
        if all(val <= 0 for val in vals):
            processed.append((a, b))
            continue
        keep = [v for v, val in zip(verts, vals) if val <= 0]
        tight = [
            frozenset(
                k
                for k, (ra, rb) in enumerate(processed)
                if sum((ai * xi for ai, xi in zip(ra, v)), ZERO) == rb
            )
            for v in verts
        ]
        new_pts: set[Point] = set()
        for i, vi in enumerate(verts):
            if vals[i] >= 0:
                continue
            for k, vk in enumerate(verts):
                if vals[k] <= 0:
                    continue
                common = tight[i] & tight[k]
                if len(common) < d - 1:
                    continue
                if _rank([processed[r][0] for r in common]) != d - 1:
                    continue
                t = -vals[i] / (vals[k] - vals[i])
                new_pts.add(tuple(x + t * (y - x) for x, y in zip(vi, vk)))
        processed.append((a, b))
        seen = set(keep)
        verts = keep + [p for p in sorted(new_pts) if p not in seen]
        if not verts:
            return []
    # drop any point that is not a true vertex (can arise when the feasible
    # set degenerates to a face of the widened box)
    out = []
    for v in sorted(set(verts)):
        tight_rows = [
            ra
            for ra, rb in processed
            if sum((ai * xi for ai, xi in zip(ra, v)), ZERO) == rb
        ]
        if _rank(tight_rows) == d:
            out.append(v)
    return out


def extreme_rays(
    rows: Sequence[Point], dim: int
) -> tuple[list[Point], list[Point]]:
    """Extreme rays and lineality basis of the cone {x : rows·x >= 0}.

    Rays are integer-normalized.  The cone's lineality space is returned
    separately; rays are extreme modulo lineality.
    """
    lin = nullspace(rows, dim)
    cons = [constraint(r, GE, 0) for r in rows]
    for l in lin:
        cons.append(constraint(l, EQ, 0))
    for j in range(dim):
        e = [ZERO] * dim
        e[j] = ONE
        cons.append(constraint(e, LE, 1))
        cons.append(constraint(e, GE, -1))
    poly = Polytope(dim, tuple(cons))
    rays = []
    nlin = len(lin)
    for v in poly.vertices():
        if all(x == 0 for x in v):
            continue
        tight = [r for r in rows if sum((a * x for a, x in zip(r, v)), ZERO) == 0]
        if _rank(list(tight) + list(lin)) == dim - 1:
            rays.append(_normalize_ray(v))
    return sorted(set(rays)), lin


def _normalize_ray(v: Point) -> Point:
    from math import gcd

    dens = 1
    for x in v:
        dens = dens * x.denominator // gcd(dens, x.denominator)
    ints = [int(x * dens) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    return tuple(Fraction(i // g) for i in ints)


def fourier_motzkin(
    rows: Sequence[tuple[Point, Fraction]], eliminate: Sequence[int], dim: int
) -> list[tuple[Point, Fraction]]:
    """Project {x : rows·x <= rhs} onto the coordinates not in `eliminate`.

    Returns rows over the full coordinate space with zeros in eliminated
    positions.  Redundant rows are pruned exactly with LPs.
    """
    current = [(tuple(a), Fraction(b)) for a, b in rows]
    for j in eliminate:
        pos = [(a, b) for a, b in current if a[j] > 0]
        neg = [(a, b) for a, b in current if a[j] < 0]
        zero = [(a, b) for a, b in current if a[j] == 0]
        combined = []
        for ap, bp in pos:
            for an, bn in neg:
                lam, mu = -an[j], ap[j]
                row = tuple(lam * x + mu * y for x, y in zip(ap, an))
                combined.append((row, lam * bp + mu * bn))
        current = zero + [_normalize_row(a, b) for a, b in combined]
        current = _prune(current, dim)
    return current


def _normalize_row(a: Point, b: Fraction) -> tuple[Point, Fraction]:
    from math import gcd

    dens = 1
    for x in list(a) + [b]:
        dens = dens * x.denominator // gcd(dens, x.denominator)
    ints = [int(x * dens) for x in a] + [int(b * dens)]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    if g == 0:
        return a, b
    return tuple(Fraction(i // g) for i in ints[:-1]), Fraction(ints[-1] // g)


def _prune(rows: list[tuple[Point, Fraction]], dim: int) -> list[tuple[Point, Fraction]]:
    rows = list(dict.fromkeys(rows))
    kept: list[tuple[Point, Fraction]] = []
    for i, (a, b) in enumerate(rows):
        others = kept + rows[i + 1 :]
        if all(x == 0 for x in a):
            continue  # 0 <= b is vacuous here (b >= 0 by construction)
        cons = tuple(constraint(ra, LE, rb) for ra, rb in others)
        out = exactlp.solve(LinearProgram(tuple(a), cons, sense="max"))
        if out.status == OPTIMAL and out.value <= b:
            continue
        kept.append((a, b))
    return kept
