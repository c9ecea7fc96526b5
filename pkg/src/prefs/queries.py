"""Query execution with canonical JSON payloads.

Every surface (batch CLI, REPL, HTTP) funnels through run_query so the
same assessment and query produce byte-identical payloads.  All rational
values are serialized as strings; decimals are presentation-only extras.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .a6star import IncoherentClosure, is_precluded, iterate_closure
from .algebra import eval_expr
from .model import (
    Assessment,
    NullEvent,
    PrefsError,
    ProbUtilityPair,
    SdeuFunction,
    format_rat,
)
from .problemfile import ParseError, parse_expr
from .representation import (
    MODE_A5,
    MODE_A6,
    build_dual,
    conditional_eu_bounds,
    eu_bounds,
    prob_bounds,
)
from .stateindep import (
    IncoherentAfterPropagation,
    NoAgreeingPair,
    a6_propagate,
    find_agreeing_pair,
    pair_eu_bounds,
)


class QueryError(PrefsError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def decimal6(q: Fraction) -> str:
    """Round-half-even rendering to 6 places, exact arithmetic."""
    scaled = q * 10**6
    n = scaled.numerator // scaled.denominator
    rem = scaled - n
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and n % 2):
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10**6}.{n % 10**6:06d}"


def rat_payload(q: Optional[Fraction]) -> Optional[dict]:
    if q is None:
        return None
    return {"value": format_rat(q), "decimal": decimal6(q)}


def sdeu_payload(v: Optional[SdeuFunction]) -> Optional[dict]:
    if v is None:
        return None
    return {
        "v": [[format_rat(x) for x in row] for row in v.v],
        "normalization": v.normalization,
    }


def pair_payload(pair: Optional[ProbUtilityPair]) -> Optional[dict]:
    if pair is None:
        return None
    return {
        "p": [format_rat(x) for x in pair.p],
        "u": [format_rat(x) for x in pair.u],
    }


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _expr(a: Assessment, node: Any, what: str):
    try:
        expr = parse_expr(node)
        return expr, eval_expr(expr, a.space)
    except (ParseError, PrefsError) as err:
        raise QueryError("parse-error", f"{what}: {err}") from None


def _farkas_payload(dual) -> Optional[list]:
    cert = dual.polytope.infeasibility_certificate()
    if cert is None:
        return None
    return [
        {"label": con.label, "multiplier": format_rat(m)}
        for con, m in zip(dual.polytope.constraints, cert)
        if m != 0
    ]


def query_check(a: Assessment) -> dict:
    d5 = build_dual(a, MODE_A5)
    coherent = not d5.polytope.is_empty()
    out: dict = {"query": "check", "a5_coherent": coherent}
    if not coherent:
        out["a5_certificate"] = _farkas_payload(d5)
        out["pair_exists"] = False
        out["pair"] = None
        return out
    out["a5_certificate"] = None
    try:
        pair = find_agreeing_pair(a)
        out["pair_exists"] = True
        out["pair"] = pair_payload(pair)
    except NoAgreeingPair:
        out["pair_exists"] = False
        out["pair"] = None
    return out


BOUND_MODES = ("sdeu", "sdeu-a6", "pairs", "a6star-iter")


def query_bounds(
    a: Assessment,
    target_node: Any,
    mode: str = "sdeu-a6",
    given: Optional[list] = None,
    iterations: int = 1,
) -> dict:
    _, x = _expr(a, target_node, "target")
    out: dict = {"query": "bounds", "mode": mode, "target": target_node}
    if given is not None:
        try:
            event = a.space.event(given)
        except PrefsError as err:
            raise QueryError("parse-error", f"given: {err}") from None
        if mode not in ("sdeu", "sdeu-a6"):
            raise QueryError(
                "bad-mode", "conditional bounds support sdeu and sdeu-a6 only"
            )
        out["given"] = list(given)
        dual = _dual_for_mode(a, mode, iterations)
        try:
            b = conditional_eu_bounds(dual, x, event)
        except NullEvent:
            raise QueryError("null-event", "conditioning event is potentially null")
    else:
        out["given"] = None
        if mode == "pairs":
            try:
                find_agreeing_pair(a)
            except NoAgreeingPair:
                raise QueryError("no-agreeing-pair", "no agreeing pair exists")
            b = pair_eu_bounds(a, x)
            out["lower"] = rat_payload(b.lower)
            out["upper"] = rat_payload(b.upper)
            out["lower_witness"] = pair_payload(b.lower_witness)
            out["upper_witness"] = pair_payload(b.upper_witness)
            return out
        dual = _dual_for_mode(a, mode, iterations)
        b = eu_bounds(dual, x)
    out["lower"] = rat_payload(b.lower)
    out["upper"] = rat_payload(b.upper)
    out["lower_witness"] = sdeu_payload(b.lower_witness)
    out["upper_witness"] = sdeu_payload(b.upper_witness)
    return out


def _dual_for_mode(a: Assessment, mode: str, iterations: int):
    if mode == "sdeu":
        d = build_dual(a, MODE_A5)
    elif mode == "sdeu-a6":
        try:
            d = a6_propagate(build_dual(a, MODE_A6)).dual
        except IncoherentAfterPropagation as err:
            raise QueryError("incoherent", str(err)) from None
    elif mode == "a6star-iter":
        try:
            d = iterate_closure(a, iterations).dual
        except IncoherentClosure as err:
            raise QueryError("incoherent", str(err)) from None
    else:
        raise QueryError("bad-mode", f"unknown mode {mode!r}")
    if d.polytope.is_empty():
        raise QueryError("incoherent", "assessment is incoherent in this mode")
    return d


def query_prob(a: Assessment, event_labels: list, mode: str = "sdeu-a6") -> dict:
    try:
        event = a.space.event(event_labels)
    except PrefsError as err:
        raise QueryError("parse-error", f"event: {err}") from None
    dual = _dual_for_mode(a, mode, 1)
    b = prob_bounds(dual, event)
    return {
        "query": "prob",
        "mode": mode,
        "event": list(event_labels),
        "lower": rat_payload(b.lower),
        "upper": rat_payload(b.upper),
    }


def query_pair(a: Assessment) -> dict:
    try:
        pair = find_agreeing_pair(a)
        return {"query": "pair", "pair_exists": True, "pair": pair_payload(pair)}
    except NoAgreeingPair:
        return {"query": "pair", "pair_exists": False, "pair": None}


def query_precluded(a: Assessment, lhs_node: Any, rhs_node: Any, level: str) -> dict:
    if level not in (MODE_A5, MODE_A6):
        raise QueryError("bad-level", f"level must be a5 or a6, got {level!r}")
    _, x = _expr(a, lhs_node, "lhs")
    _, y = _expr(a, rhs_node, "rhs")
    verdict = is_precluded(a, x, y, level)
    cert: Any = None
    if verdict.precluded:
        if level == MODE_A5:
            cert = [
                {"label": lbl, "multiplier": format_rat(m)}
                for lbl, m in (verdict.certificate or ())
            ]
        else:
            cert = verdict.certificate
    return {
        "query": "precluded",
        "level": level,
        "lhs": lhs_node,
        "rhs": rhs_node,
        "precluded": verdict.precluded,
        "certificate": cert,
    }


def run_query(a: Assessment, q: dict) -> dict:
    """Dispatch a JSON query object. Raises QueryError on bad input."""
    if not isinstance(q, dict) or "kind" not in q:
        raise QueryError("bad-request", "query must be an object with a 'kind'")
    kind = q["kind"]
    if kind == "check":
        return query_check(a)
    if kind == "bounds":
        if "target" not in q:
            raise QueryError("bad-request", "bounds query needs a target")
        return query_bounds(
            a,
            q["target"],
            mode=q.get("mode", "sdeu-a6"),
            given=q.get("given"),
            iterations=int(q.get("iterations", 1)),
        )
    if kind == "prob":
        if "event" not in q:
            raise QueryError("bad-request", "prob query needs an event")
        return query_prob(a, q["event"], mode=q.get("mode", "sdeu-a6"))
    if kind == "pair":
        return query_pair(a)
    if kind == "precluded":
        if "lhs" not in q or "rhs" not in q:
            raise QueryError("bad-request", "precluded query needs lhs and rhs")
        return query_precluded(a, q["lhs"], q["rhs"], q.get("level", MODE_A6))
    raise QueryError("bad-request", f"unknown query kind {kind!r}")
