"""Command line interface.

Exit codes: 0 ok, 1 incoherent or no agreeing pair, 2 parse error.
Expression arguments accept either a JSON expression object or the
shorthands const:LABEL, chance:RAT, event:s1,s2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .model import Assessment, PrefsError
from .problemfile import ParseError, load_problem, problem_to_json
from .queries import (
    QueryError,
    canonical_json,
    query_bounds,
    query_check,
    query_pair,
    query_precluded,
    query_prob,
)

EXIT_OK = 0
EXIT_INCOHERENT = 1
EXIT_PARSE = 2

INCOHERENT_CODES = {"incoherent", "no-agreeing-pair"}
PARSE_CODES = {"parse-error", "bad-request", "bad-mode", "bad-level"}


def parse_expr_arg(text: str) -> Any:
    """JSON expression object, or one of the colon shorthands."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON expression: {err}") from None
    if ":" in text:
        kind, _, rest = text.partition(":")
        if kind == "const":
            return {"const": rest}
        if kind == "chance":
            return {"chance": rest}
        if kind == "event":
            return {"event": rest.split(",")}
    raise ParseError(
        f"cannot read expression {text!r}; use JSON or const:/chance:/event: shorthand"
    )


def _emit(payload: dict) -> None:
    print(canonical_json(payload))


def _fail(code: str, message: str) -> int:
    print(canonical_json({"error": {"code": code, "message": message}}), file=sys.stderr)
    if code in PARSE_CODES:
        return EXIT_PARSE
    return EXIT_INCOHERENT


def cmd_check(args) -> int:
    a = load_problem(args.file)
    payload = query_check(a)
    _emit(payload)
    if not payload["a5_coherent"] or not payload["pair_exists"]:
        return EXIT_INCOHERENT
    return EXIT_OK


def cmd_bounds(args) -> int:
    a = load_problem(args.file)
    target = parse_expr_arg(args.target)
    mode, iterations = args.mode, 1
    if mode.startswith("a6star-iter"):
        parts = mode.split()
        mode = "a6star-iter"
        if len(parts) == 2:
            iterations = int(parts[1])
        elif args.iterations is not None:
            iterations = args.iterations
    given = args.given.split(",") if args.given else None
    _emit(query_bounds(a, target, mode=mode, given=given, iterations=iterations))
    return EXIT_OK


def cmd_prob(args) -> int:
    a = load_problem(args.file)
    _emit(query_prob(a, args.event.split(","), mode=args.mode))
    return EXIT_OK


def cmd_pair(args) -> int:
    a = load_problem(args.file)
    payload = query_pair(a)
    _emit(payload)
    return EXIT_OK if payload["pair_exists"] else EXIT_INCOHERENT


def cmd_precluded(args) -> int:
    a = load_problem(args.file)
    _emit(
        query_precluded(
            a, parse_expr_arg(args.lhs), parse_expr_arg(args.rhs), args.level
        )
    )
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    a = load_problem(args.file)
    _emit({"query": "report", **write_report(a, args.out)})
    return EXIT_OK


def cmd_repl(args) -> int:
    from .session import Session

    if args.file:
        a = load_problem(args.file)
    else:
        line = input("states (comma separated)> ")
        states = tuple(s.strip() for s in line.split(","))
        line = input("consequences (worst, best, ... comma separated)> ")
        consequences = tuple(c.strip() for c in line.split(","))
        from .model import Space

        a = Assessment(Space(states, consequences), ())
    s = Session(a)
    print(f"session {s.session_id}; verbs: assert, query, undo, state, export, quit")
    while True:
        try:
            line = input("prefs> ").strip()
        except EOFError:
            return EXIT_OK
        if not line:
            continue
        verb, _, rest = line.partition(" ")
        try:
            if verb == "quit":
                return EXIT_OK
            elif verb == "assert":
                _emit(s.assert_preference(json.loads(rest)))
            elif verb == "query":
                _emit(s.query(json.loads(rest)))
            elif verb == "undo":
                _emit(s.undo())
            elif verb == "state":
                _emit(s.state())
            elif verb == "export":
                doc = canonical_json(s.export_problem())
                if rest:
                    with open(rest, "w") as fh:
                        fh.write(doc + "\n")
                    print(f"wrote {rest}")
                else:
                    print(doc)
            else:
                print(f"unknown verb {verb!r}", file=sys.stderr)
        except (QueryError, PrefsError, json.JSONDecodeError) as err:
            print(canonical_json({"error": {"message": str(err)}}), file=sys.stderr)


def cmd_serve(args) -> int:
    from .server import serve

    a = load_problem(args.file) if args.file else None
    serve(a, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="prefs",
        description="coherence, entailment, and bound queries for preference bases",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="A5 coherence and agreeing-pair existence")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("bounds", help="expected-utility bounds for a lottery")
    sp.add_argument("file")
    sp.add_argument("--target", required=True)
    sp.add_argument("--given", help="conditioning event, comma separated states")
    sp.add_argument(
        "--mode",
        default="sdeu-a6",
        help="sdeu | sdeu-a6 | pairs | a6star-iter [with --iterations N]",
    )
    sp.add_argument("--iterations", type=int, help="rounds for a6star-iter")
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("prob", help="lower/upper probability of an event")
    sp.add_argument("file")
    sp.add_argument("--event", required=True, help="comma separated state labels")
    sp.add_argument("--mode", default="sdeu-a6", choices=["sdeu", "sdeu-a6"])
    sp.set_defaults(fn=cmd_prob)

    sp = sub.add_parser("pair", help="find an agreeing probability/utility pair")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_pair)

    sp = sub.add_parser("precluded", help="would asserting lhs >= rhs break coherence")
    sp.add_argument("file")
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--level", required=True, choices=["a5", "a6"])
    sp.set_defaults(fn=cmd_precluded)

    sp = sub.add_parser("report", help="write bound tables and figures")
    sp.add_argument("file")
    sp.add_argument("--out", default="report", help="output directory")
    sp.set_defaults(fn=cmd_report)

    sp = sub.add_parser("repl", help="interactive session")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(fn=cmd_repl)

    sp = sub.add_parser("serve", help="local HTTP session API")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--port", type=int, default=8710)
    sp.set_defaults(fn=cmd_serve)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except QueryError as err:
        return _fail(err.code, str(err))
    except ParseError as err:
        return _fail("parse-error", str(err))
    except PrefsError as err:
        return _fail("domain-error", str(err))


if __name__ == "__main__":
    sys.exit(main())
