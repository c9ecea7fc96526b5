"""Domain types: spaces, lotteries, s.d.e.u. functions, assessments.

All values are exact rationals and all types are immutable.  Consequence
index 0 is the designated worst outcome, index 1 the designated best.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

VPLUS = "V+"
VPLUSPLUS = "V++"


class PrefsError(Exception):
    """Base class for engine errors."""


class DimensionMismatch(PrefsError):
    pass


class NegativeEntry(PrefsError):
    pass


class RowSumNotOne(PrefsError):
    pass


class NotProductForm(PrefsError):
    """An s.d.e.u. function that does not factor as p(s)*u(c)."""


class BadWeight(PrefsError):
    pass


class UnknownLabel(PrefsError):
    pass


class IncoherentAssessment(PrefsError):
    pass


class NullEvent(PrefsError):
    """Conditioning event is potentially null (lower probability zero)."""


def parse_rat(text) -> Fraction:
    """Parse "n/d" or a decimal literal as an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise PrefsError(f"refusing to parse float {text!r}; use a string")
    return Fraction(str(text).strip())


def format_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


Matrix = tuple[tuple[Fraction, ...], ...]


def _freeze(m) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


@dataclass(frozen=True)
class Space:
    states: tuple[str, ...]
    consequences: tuple[str, ...]

    def __post_init__(self):
        if len(self.consequences) < 2:
            raise PrefsError("need at least a worst and a best consequence")
        if len(self.states) < 1:
            raise PrefsError("need at least one state")
        if len(set(self.states)) != len(self.states):
            raise PrefsError("duplicate state labels")
        if len(set(self.consequences)) != len(self.consequences):
            raise PrefsError("duplicate consequence labels")

    @property
    def ns(self) -> int:
        return len(self.states)

    @property
    def nc(self) -> int:
        return len(self.consequences)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown state {label!r}") from None

    def consequence_index(self, label: str) -> int:
        try:
            return self.consequences.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown consequence {label!r}") from None

    def event(self, labels: Sequence[str]) -> frozenset[int]:
        return frozenset(self.state_index(l) for l in labels)


@dataclass(frozen=True)
class Lottery:
    probs: Matrix

    def __sub__(self, other: "Lottery") -> "Direction":
        if len(self.probs) != len(other.probs):
            raise DimensionMismatch("cannot subtract lotteries of different shape")
        return Direction(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.probs, other.probs)
            )
        )


@dataclass(frozen=True)
class Direction:
    """A difference of two lotteries: every row sums to zero."""

    delta: Matrix

    def __post_init__(self):
        for row in self.delta:
            if sum(row, ZERO) != 0:
                raise PrefsError("direction rows must sum to zero")

    def scale(self, k: Fraction) -> "Direction":
        k = Fraction(k)
        return Direction(tuple(tuple(k * x for x in row) for row in self.delta))

    def __add__(self, other: "Direction") -> "Direction":
        return Direction(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.delta, other.delta)
            )
        )

    def __sub__(self, other: "Direction") -> "Direction":
        return self + other.scale(-1)


def validate_lottery(m, space: Space) -> Lottery:
    probs = _freeze(m)
    if len(probs) != space.ns or any(len(r) != space.nc for r in probs):
        raise DimensionMismatch(
            f"expected {space.ns}x{space.nc} matrix, got "
            f"{len(probs)}x{len(probs[0]) if probs else 0}"
        )
    for s, row in enumerate(probs):
        for c, x in enumerate(row):
            if x < 0:
                raise NegativeEntry(f"negative probability at ({s},{c}): {x}")
        if sum(row, ZERO) != 1:
            raise RowSumNotOne(f"row {s} sums to {sum(row, ZERO)}, not 1")
    return Lottery(probs)


@dataclass(frozen=True)
class SdeuFunction:
    """State-dependent expected utility function, normalized.

    v[s][0] = 0 and sum_s v[s][1] = 1 always; V++ additionally bounds
    0 <= v[s][c] <= v[s][1] <= 1 per state, V+ only the column sums.
    """

    v: Matrix
    normalization: str = VPLUSPLUS

    def __post_init__(self):
        ns = len(self.v)
        nc = len(self.v[0])
        if any(row[0] != 0 for row in self.v):
            raise PrefsError("v[s][0] must be 0")
        if sum((row[1] for row in self.v), ZERO) != 1:
            raise PrefsError("sum_s v[s][1] must be 1")
        if self.normalization == VPLUSPLUS:
            for s in range(ns):
                if not (0 <= self.v[s][1] <= 1):
                    raise PrefsError("v[s][1] outside [0,1]")
                for c in range(2, nc):
                    if not (0 <= self.v[s][c] <= self.v[s][1]):
                        raise PrefsError(f"v[{s}][{c}] outside [0, v[{s}][1]]")
        else:
            for c in range(2, nc):
                col = sum((row[c] for row in self.v), ZERO)
                if not (0 <= col <= 1):
                    raise PrefsError(f"column {c} sum outside [0,1]")

    def state_probability(self, s: int) -> Fraction:
        return self.v[s][1]


@dataclass(frozen=True)
class ProbUtilityPair:
    p: tuple[Fraction, ...]
    u: tuple[Fraction, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.p) or sum(self.p, ZERO) != 1:
            raise PrefsError("p must be a probability distribution")
        if self.u[0] != 0 or self.u[1] != 1:
            raise PrefsError("u must have u[0]=0 and u[1]=1")
        if any(not (0 <= x <= 1) for x in self.u):
            raise PrefsError("utilities must lie in [0,1]")


def pair_to_sdeu(pair: ProbUtilityPair) -> SdeuFunction:
    v = tuple(tuple(ps * uc for uc in pair.u) for ps in pair.p)
    return SdeuFunction(v, VPLUSPLUS)


def sdeu_as_pair(fn: SdeuFunction) -> ProbUtilityPair:
    """Factor v as p(s)*u(c), exactly.

    Utilities in zero-probability states are unconstrained and ignored;
    raises NotProductForm when positive-probability states disagree.
    """
    if fn.normalization != VPLUSPLUS:
        raise PrefsError("product-form test requires V++ normalization")
    ns, nc = len(fn.v), len(fn.v[0])
    p = tuple(fn.v[s][1] for s in range(ns))
    u = [ZERO, ONE] + [None] * (nc - 2)
    for c in range(2, nc):
        vals = {fn.v[s][c] / p[s] for s in range(ns) if p[s] > 0}
        if len(vals) != 1:
            raise NotProductForm(
                f"consequence {c} has state-dependent utilities {sorted(vals)}"
            )
        u[c] = vals.pop()
    return ProbUtilityPair(p, tuple(u))


def try_sdeu_as_pair(fn: SdeuFunction) -> Optional[ProbUtilityPair]:
    try:
        return sdeu_as_pair(fn)
    except NotProductForm:
        return None


@dataclass(frozen=True)
class Preference:
    """lhs is weakly preferred to rhs; both sides are expression trees."""

    lhs: "LotteryExpr"  # noqa: F821 - defined in prefs.algebra
    rhs: "LotteryExpr"  # noqa: F821


@dataclass(frozen=True)
class Assessment:
    space: Space
    basis: tuple[Preference, ...]

    def extended(self, *prefs: Preference) -> "Assessment":
        return Assessment(self.space, self.basis + tuple(prefs))
