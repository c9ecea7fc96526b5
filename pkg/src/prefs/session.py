"""Incremental elicitation sessions shared by the REPL and the HTTP API.

A session wraps an Assessment and an append-only log.  Assertions that
empty the A5 dual polytope are rejected and rolled back, with the Farkas
certificate attached to the rejection payload.
"""

from __future__ import annotations

import itertools
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from .model import Assessment, Preference, PrefsError, Space, format_rat
from .problemfile import ParseError, parse_preference, problem_to_json
from .queries import QueryError, pair_payload, run_query
from .representation import MODE_A5, MODE_A6, build_dual
from .stateindep import NoAgreeingPair, find_agreeing_pair


@dataclass
class Session:
    assessment: Assessment
    session_id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    log: list = field(default_factory=list)

    @property
    def space(self) -> Space:
        return self.assessment.space

    def assert_preference(self, node: Any) -> dict:
        """Try to add lhs >= rhs; reject (and roll back) if A5 breaks."""
        try:
            pref = parse_preference(node, self.space, "$.assert")
        except ParseError as err:
            raise QueryError("parse-error", str(err)) from None
        candidate = self.assessment.extended(pref)
        d5 = build_dual(candidate, MODE_A5)
        if d5.polytope.is_empty():
            cert = d5.polytope.infeasibility_certificate()
            payload = {
                "accepted": False,
                "reason": "assertion empties the coherent set",
                "certificate": [
                    {"label": con.label, "multiplier": format_rat(m)}
                    for con, m in zip(d5.polytope.constraints, cert or ())
                    if m != 0
                ],
            }
            self.log.append({"action": "assert", "preference": node, **payload})
            return payload
        self.assessment = candidate
        payload = {
            "accepted": True,
            "reason": None,
            "certificate": None,
            **self._headline(),
        }
        self.log.append({"action": "assert", "preference": node, **payload})
        return payload

    def _headline(self) -> dict:
        """Post-assertion summary: pair existence and a reverse-preclusion
        warning for the most recent assertion."""
        out: dict = {}
        try:
            out["pair"] = pair_payload(find_agreeing_pair(self.assessment))
            out["pair_exists"] = True
        except NoAgreeingPair:
            out["pair"] = None
            out["pair_exists"] = False
        last = self.assessment.basis[-1]
        reversed_pref = Preference(last.rhs, last.lhs)
        d5 = build_dual(self.assessment.extended(reversed_pref), MODE_A5)
        out["reverse_precluded"] = d5.polytope.is_empty()
        return out

    def undo(self) -> dict:
        if not self.assessment.basis:
            raise QueryError("nothing-to-undo", "no assertions to undo")
        # rejected assertions never entered the basis; drop the last accepted one
        self.assessment = Assessment(self.space, self.assessment.basis[:-1])
        payload = {"undone": True, "remaining": len(self.assessment.basis)}
        self.log.append({"action": "undo", **payload})
        return payload

    def query(self, q: dict) -> dict:
        result = run_query(self.assessment, q)
        self.log.append({"action": "query", "request": q, "result": result})
        return result

    def state(self) -> dict:
        return {
            "session_id": self.session_id,
            "problem": problem_to_json(self.assessment),
            "log": self.log,
        }

    def export_problem(self) -> dict:
        return problem_to_json(self.assessment)

    def region(self, grid_step: int = 100) -> dict:
        """Plottable snapshot for the 2-state, 3-consequence case: dual
        polytope vertices and the agreeing-pair set sampled on the u-grid.

        Vertices carry a 2-d projection (x, y) = (v(s0,best), U_v(H_last)):
        for product-form vertices this is (p(s0), u(last consequence)),
        which is the natural plotting plane for segment geometry.
        """
        space = self.space
        if space.ns != 2 or space.nc != 3:
            raise QueryError(
                "region-unavailable",
                "region snapshots require exactly 2 states and 3 consequences",
            )
        d = build_dual(self.assessment, MODE_A6)
        verts = []
        for v in sorted(d.polytope.vertices()):
            x = v[0]  # v(s0, c1)
            y = v[1] + v[3]  # v(s0, c2) + v(s1, c2)
            verts.append(
                {
                    "x": format_rat(x),
                    "y": format_rat(y),
                    "v": [["0"] + [format_rat(q) for q in v[:2]],
                          ["0"] + [format_rat(q) for q in v[2:]]],
                }
            )
        pairs = [pair_payload(p) for p in grid_pairs(self.assessment, grid_step)]
        return {"vertices": verts, "pairs": pairs, "grid_step": grid_step}


def grid_pairs(a: Assessment, step: int = 100) -> list:
    """All agreeing pairs found on the u-grid of mesh 1/step."""
    from fractions import Fraction

    from .exactlp import LinearProgram, OPTIMAL, solve
    from .model import ZERO
    from .stateindep import _pair_from_point, _pair_lp_constraints, pair_satisfies

    space = a.space
    grid = [Fraction(k, step) for k in range(step + 1)]
    found = []
    for tail in itertools.product(grid, repeat=space.nc - 2):
        u = (ZERO, Fraction(1)) + tail
        cons = _pair_lp_constraints(a, u)
        lp = LinearProgram(tuple([ZERO] * space.ns), tuple(cons), sense="min")
        out = solve(lp)
        if out.status == OPTIMAL:
            pair = _pair_from_point(out.point, tail)
            if pair_satisfies(a, pair):
                found.append(pair)
    return found


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}

    def create(self, assessment: Assessment) -> Session:
        s = Session(assessment)
        self._sessions[s.session_id] = s
        return s

    def get(self, session_id: str) -> Session:
        if session_id not in self._sessions:
            raise QueryError("no-such-session", f"unknown session {session_id!r}")
        return self._sessions[session_id]
