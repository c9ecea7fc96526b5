from fractions import Fraction as F

from prefs.exactlp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    constraint,
    maximize_ratio,
    solve,
    verify_farkas,
)


def lp(obj, cons, sense="min"):
    return LinearProgram(tuple(F(x) for x in obj), tuple(cons), sense=sense)


def test_simple_minimum():
    out = solve(
        lp(
            [1, 1],
            [
                constraint([F(1), F(0)], GE, F(2), "x"),
                constraint([F(0), F(1)], GE, F(3), "y"),
            ],
        )
    )
    assert out.status == OPTIMAL
    assert out.value == F(5)
    assert out.point == (F(2), F(3))


def test_equality_and_max():
    out = solve(
        lp(
            [2, 1],
            [
                constraint([F(1), F(1)], EQ, F(1), "sum"),
                constraint([F(1), F(0)], GE, F(0), "x"),
                constraint([F(0), F(1)], GE, F(0), "y"),
            ],
            sense="max",
        )
    )
    assert out.status == OPTIMAL and out.value == F(2)


def test_infeasible_with_valid_certificate():
    cons = (
        constraint([F(1)], GE, F(2), "lo"),
        constraint([F(1)], LE, F(1), "hi"),
    )
    out = solve(lp([1], cons))
    assert out.status == INFEASIBLE
    assert verify_farkas(cons, out.certificate)


def test_unbounded():
    out = solve(lp([-1], [constraint([F(1)], GE, F(0), "nn")]))
    assert out.status == UNBOUNDED


def test_exact_rationals_survive():
    out = solve(
        lp(
            [1],
            [constraint([F(9)], GE, F(4), "r")],
        )
    )
    assert out.value == F(4, 9)


def test_maximize_ratio_linear_fractional():
    # max (x + 1) / (y + 1) over the box [0,1]^2 is 2 at (1, 0)
    cons = [
        constraint([F(1), F(0)], GE, F(0), "x-lo"),
        constraint([F(1), F(0)], LE, F(1), "x-hi"),
        constraint([F(0), F(1)], GE, F(0), "y-lo"),
        constraint([F(0), F(1)], LE, F(1), "y-hi"),
    ]
    out = maximize_ratio(
        ((F(1), F(0)), F(1)), ((F(0), F(1)), F(1)), cons, sense="max"
    )
    assert out.status == OPTIMAL
    assert out.value == F(2)
    assert out.point == (F(1), F(0))
    out = maximize_ratio(
        ((F(1), F(0)), F(1)), ((F(0), F(1)), F(1)), cons, sense="min"
    )
    assert out.value == F(1, 2)
