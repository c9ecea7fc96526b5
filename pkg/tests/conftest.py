import random
from fractions import Fraction as F

import pytest

from prefs.algebra import (
    ChanceExpr,
    ConstExpr,
    EventExpr,
    GivenExpr,
    MatrixExpr,
    chance,
    eval_expr,
    mix,
)
from prefs.model import (
    Assessment,
    Preference,
    ProbUtilityPair,
    Space,
    pair_to_sdeu,
)
from prefs.representation import basis_from_credal

THREE_STATE_SPACE = Space(("s1", "s2", "s3"), ("c0", "c1", "c2"))
X5_MATRIX = ((1, 0, 0), (0, 0, 1), (0, 1, 0))
X5 = MatrixExpr(X5_MATRIX)


def three_state_assessment() -> Assessment:
    basis = [
        Preference(EventExpr(("s1",)), chance("0.1")),
        Preference(EventExpr(("s2",)), chance("0.1")),
        Preference(EventExpr(("s3",)), chance("0.1")),
        Preference(X5, chance("0.5")),
        Preference(
            mix("1/2", GivenExpr(ConstExpr("c2"), ("s1",)), X5),
            mix("1/2", GivenExpr(ChanceExpr(F(9, 10)), ("s1",)), chance("0.5")),
        ),
        Preference(
            mix("1/2", GivenExpr(ChanceExpr(F(1, 10)), ("s2",)), X5),
            mix("1/2", GivenExpr(ConstExpr("c2"), ("s2",)), chance("0.5")),
        ),
    ]
    return Assessment(THREE_STATE_SPACE, tuple(basis))


SEGMENT_SPACE = Space(("s1", "s2"), ("c0", "c1", "c2"))
PAIR_V0 = ProbUtilityPair((F(1, 10), F(9, 10)), (F(0), F(1), F(1, 10)))
PAIR_V1 = ProbUtilityPair((F(3, 10), F(7, 10)), (F(0), F(1), F(2, 5)))


def segment_assessment() -> Assessment:
    return basis_from_credal(
        (pair_to_sdeu(PAIR_V0), pair_to_sdeu(PAIR_V1)), SEGMENT_SPACE
    )


@pytest.fixture(scope="session")
def three_state():
    return three_state_assessment()


@pytest.fixture(scope="session")
def x5_lottery():
    return eval_expr(X5, THREE_STATE_SPACE)


@pytest.fixture(scope="session")
def segment():
    return segment_assessment()


def random_space(rng: random.Random) -> Space:
    ns = rng.randint(1, 3)
    nc = rng.randint(2, 3)
    return Space(
        tuple(f"s{i}" for i in range(ns)), tuple(f"c{i}" for i in range(nc))
    )


def random_lottery_rows(rng: random.Random, space: Space):
    rows = []
    for _ in range(space.ns):
        cuts = sorted(F(rng.randint(0, 6), 6) for _ in range(space.nc - 1))
        row = []
        prev = F(0)
        for cut in cuts:
            row.append(cut - prev)
            prev = cut
        row.append(1 - prev)
        rows.append(tuple(row))
    return tuple(rows)


def random_lottery_expr(rng: random.Random, space: Space) -> MatrixExpr:
    return MatrixExpr(random_lottery_rows(rng, space))


def random_preference(rng: random.Random, space: Space) -> Preference:
    return Preference(random_lottery_expr(rng, space), random_lottery_expr(rng, space))


def random_assessment(rng: random.Random, max_prefs: int = 5) -> Assessment:
    space = random_space(rng)
    basis = tuple(
        random_preference(rng, space) for _ in range(rng.randint(0, max_prefs))
    )
    return Assessment(space, basis)


def random_pair(rng: random.Random, space: Space) -> ProbUtilityPair:
    weights = [rng.randint(0, 5) for _ in range(space.ns)]
    if sum(weights) == 0:
        weights[rng.randrange(space.ns)] = 1
    total = sum(weights)
    p = tuple(F(w, total) for w in weights)
    u = (F(0), F(1)) + tuple(F(rng.randint(0, 8), 8) for _ in range(space.nc - 2))
    return ProbUtilityPair(p, u)
