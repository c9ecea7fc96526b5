import json

import pytest

from prefs.algebra import eval_expr
from prefs.problemfile import (
    ParseError,
    expr_to_json,
    parse_expr,
    parse_problem,
    problem_to_json,
)

DOC = {
    "states": ["s1", "s2"],
    "consequences": ["c0", "c1", "c2"],
    "preferences": [
        {"lhs": {"const": "c2"}, "rhs": {"chance": "0.15"}},
        {
            "lhs": {
                "mix": [
                    {"w": "1/2", "of": {"event": ["s1"]}},
                    {"w": "1/4", "of": {"const": "c1"}},
                    {"w": "1/4", "of": {"chance": "1/3"}},
                ]
            },
            "rhs": {"given": {"event": ["s2"], "then": {"const": "c2"}}},
        },
    ],
}


def test_parse_and_roundtrip():
    a = parse_problem(json.dumps(DOC))
    assert len(a.basis) == 2
    doc2 = problem_to_json(a)
    a2 = parse_problem(json.dumps(doc2))
    for p1, p2 in zip(a.basis, a2.basis):
        assert eval_expr(p1.lhs, a.space) == eval_expr(p2.lhs, a2.space)
        assert eval_expr(p1.rhs, a.space) == eval_expr(p2.rhs, a2.space)


def test_nary_mix_folds_exactly():
    a = parse_problem(json.dumps(DOC))
    lot = eval_expr(a.basis[1].lhs, a.space)
    # 1/2 event + 1/4 best + 1/4 H_{1/3}, state s1 row
    from fractions import Fraction as F

    assert lot.probs[0] == (F(1, 6), F(5, 6), F(0))


def test_rat_strings_only():
    bad = dict(DOC)
    bad["preferences"] = [{"lhs": {"chance": 0.5}, "rhs": {"const": "c0"}}]
    with pytest.raises(ParseError) as err:
        parse_problem(json.dumps(bad))
    assert "preferences[0]" in str(err.value)


def test_mix_weights_must_sum_to_one():
    with pytest.raises(ParseError) as err:
        parse_expr(
            {
                "mix": [
                    {"w": "1/2", "of": {"const": "c0"}},
                    {"w": "1/3", "of": {"const": "c1"}},
                ]
            }
        )
    assert "sum to 1" in str(err.value)


def test_unknown_kind_and_label_locations():
    with pytest.raises(ParseError) as err:
        parse_expr({"bogus": 1})
    assert "bogus" in str(err.value)

    bad = dict(DOC)
    bad["preferences"] = [{"lhs": {"const": "nope"}, "rhs": {"const": "c0"}}]
    with pytest.raises(ParseError) as err:
        parse_problem(json.dumps(bad))
    assert "lhs" in str(err.value)


def test_duplicate_labels_rejected():
    bad = dict(DOC)
    bad["states"] = ["s1", "s1"]
    with pytest.raises(ParseError):
        parse_problem(json.dumps(bad))


def test_expr_json_roundtrip_preserves_mix():
    node = DOC["preferences"][1]["lhs"]
    expr = parse_expr(node)
    again = expr_to_json(expr)
    space = parse_problem(json.dumps(DOC)).space
    assert eval_expr(parse_expr(again), space) == eval_expr(expr, space)
