"""Problem file format: JSON in, Assessment out, and back again.

Rationals travel as strings ("4/9" or exact decimal literals like "0.1"),
never as floats.  Parse errors carry a location path such as
"preferences[2].lhs.mix[0].w".
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

from .algebra import (
    ChanceExpr,
    ConstExpr,
    EventExpr,
    GivenExpr,
    LotteryExpr,
    MatrixExpr,
    MixExpr,
)
from .model import Assessment, Preference, PrefsError, Space, format_rat, parse_rat


class ParseError(PrefsError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


def _rat(node: Any, loc: str) -> Fraction:
    if not isinstance(node, str):
        raise ParseError("rationals must be strings", loc)
    try:
        return parse_rat(node)
    except (PrefsError, ValueError, ZeroDivisionError) as err:
        raise ParseError(str(err), loc) from None


def parse_expr(node: Any, loc: str = "$") -> LotteryExpr:
    if not isinstance(node, dict) or len(node) != 1:
        raise ParseError("expression must be an object with one key", loc)
    (kind, body), = node.items()
    if kind == "matrix":
        if not isinstance(body, list) or not all(isinstance(r, list) for r in body):
            raise ParseError("matrix must be a list of rows", loc)
        rows = tuple(
            tuple(_rat(x, f"{loc}.matrix[{i}][{j}]") for j, x in enumerate(row))
            for i, row in enumerate(body)
        )
        return MatrixExpr(rows)
    if kind == "const":
        if not isinstance(body, str):
            raise ParseError("const takes a consequence label", loc)
        return ConstExpr(body)
    if kind == "chance":
        return ChanceExpr(_rat(body, f"{loc}.chance"))
    if kind == "event":
        if not isinstance(body, list) or not all(isinstance(s, str) for s in body):
            raise ParseError("event takes a list of state labels", loc)
        return EventExpr(tuple(body))
    if kind == "mix":
        return _parse_mix(body, loc)
    if kind == "given":
        if not isinstance(body, dict):
            raise ParseError("given takes an object", loc)
        extra = set(body) - {"event", "then"}
        if extra or "event" not in body or "then" not in body:
            raise ParseError("given needs exactly 'event' and 'then'", loc)
        ev = body["event"]
        if not isinstance(ev, list) or not all(isinstance(s, str) for s in ev):
            raise ParseError("given.event takes a list of state labels", loc)
        return GivenExpr(parse_expr(body["then"], f"{loc}.given.then"), tuple(ev))
    raise ParseError(f"unknown expression kind {kind!r}", loc)


def _parse_mix(body: Any, loc: str) -> LotteryExpr:
    if not isinstance(body, list) or not body:
        raise ParseError("mix takes a nonempty list of {w, of} terms", loc)
    terms = []
    for i, t in enumerate(body):
        tl = f"{loc}.mix[{i}]"
        if not isinstance(t, dict) or set(t) != {"w", "of"}:
            raise ParseError("mix terms need exactly 'w' and 'of'", tl)
        w = _rat(t["w"], f"{tl}.w")
        if w < 0:
            raise ParseError("mix weight must be nonnegative", f"{tl}.w")
        terms.append((w, parse_expr(t["of"], f"{tl}.of")))
    if sum(w for w, _ in terms) != 1:
        raise ParseError("mix weights must sum to 1", loc)
    # fold the n-ary mixture into nested binary mixtures
    def fold(items):
        if len(items) == 1:
            return items[0][1]
        w0, e0 = items[0]
        if w0 == 1:
            return e0
        rest = [(w / (1 - w0), e) for w, e in items[1:]]
        return MixExpr(w0, e0, fold(rest))
    return fold(terms)


def expr_to_json(expr: LotteryExpr) -> dict:
    if isinstance(expr, MatrixExpr):
        return {"matrix": [[format_rat(Fraction(x)) for x in row] for row in expr.rows]}
    if isinstance(expr, ConstExpr):
        return {"const": expr.consequence}
    if isinstance(expr, ChanceExpr):
        return {"chance": format_rat(expr.q)}
    if isinstance(expr, EventExpr):
        return {"event": list(expr.states)}
    if isinstance(expr, MixExpr):
        terms = []
        w_left = Fraction(expr.weight)
        terms.append({"w": format_rat(w_left), "of": expr_to_json(expr.left)})
        right = expr_to_json(expr.right)
        scale = 1 - w_left
        if "mix" in right:
            for t in right["mix"]:
                terms.append(
                    {"w": format_rat(parse_rat(t["w"]) * scale), "of": t["of"]}
                )
        else:
            terms.append({"w": format_rat(scale), "of": right})
        return {"mix": terms}
    if isinstance(expr, GivenExpr):
        return {
            "given": {"event": list(expr.states), "then": expr_to_json(expr.inner)}
        }
    raise ParseError(f"unknown expression type {type(expr).__name__}")


def parse_preference(node: Any, space: Space, loc: str) -> Preference:
    if not isinstance(node, dict) or set(node) != {"lhs", "rhs"}:
        raise ParseError("preference needs exactly 'lhs' and 'rhs'", loc)
    pref = Preference(
        parse_expr(node["lhs"], f"{loc}.lhs"), parse_expr(node["rhs"], f"{loc}.rhs")
    )
    # force evaluation now so label and shape errors surface with a location
    from .algebra import eval_expr

    for side, attr in (("lhs", pref.lhs), ("rhs", pref.rhs)):
        try:
            eval_expr(attr, space)
        except PrefsError as err:
            raise ParseError(str(err), f"{loc}.{side}") from None
    return pref


def parse_problem(doc: Union[str, dict]) -> Assessment:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be an object")
    for key in ("states", "consequences", "preferences"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    states, consequences = doc["states"], doc["consequences"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ParseError("states must be a list of strings", "$.states")
    if not isinstance(consequences, list) or not all(
        isinstance(c, str) for c in consequences
    ):
        raise ParseError("consequences must be a list of strings", "$.consequences")
    try:
        space = Space(tuple(states), tuple(consequences))
    except PrefsError as err:
        raise ParseError(str(err)) from None
    prefs_node = doc["preferences"]
    if not isinstance(prefs_node, list):
        raise ParseError("preferences must be a list", "$.preferences")
    basis = tuple(
        parse_preference(p, space, f"$.preferences[{i}]")
        for i, p in enumerate(prefs_node)
    )
    return Assessment(space, basis)


def load_problem(path: str) -> Assessment:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ParseError(str(err)) from None
    return parse_problem(text)


def problem_to_json(a: Assessment) -> dict:
    return {
        "states": list(a.space.states),
        "consequences": list(a.space.consequences),
        "preferences": [
            {"lhs": expr_to_json(p.lhs), "rhs": expr_to_json(p.rhs)}
            for p in a.basis
        ],
    }
