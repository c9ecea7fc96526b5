"""Local HTTP session API.

Single-analyst desk tool: binds localhost, no auth.  Payloads are the
canonical query payloads from the queries module, so batch CLI, REPL,
and HTTP responses are byte-identical for the same assessment and query.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .model import Assessment, PrefsError, Space
from .problemfile import ParseError, parse_problem
from .queries import QueryError, canonical_json
from .session import Session, SessionStore

ERROR_STATUS = {
    "parse-error": 400,
    "bad-request": 400,
    "bad-mode": 400,
    "bad-level": 400,
    "no-such-session": 404,
    "nothing-to-undo": 409,
    "region-unavailable": 409,
    "null-event": 422,
    "no-agreeing-pair": 422,
    "incoherent": 422,
}


def _canonical(payload: dict, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status,
        media_type="application/json",
    )


def create_app(initial: Optional[Assessment] = None) -> FastAPI:
    app = FastAPI(title="prefs", docs_url=None, redoc_url=None)
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()

    @app.exception_handler(QueryError)
    async def _query_error(request: Request, err: QueryError):
        return _canonical(
            {"error": {"code": err.code, "message": str(err)}},
            ERROR_STATUS.get(err.code, 400),
        )

    @app.exception_handler(PrefsError)
    async def _prefs_error(request: Request, err: PrefsError):
        return _canonical(
            {"error": {"code": "domain-error", "message": str(err)}}, 422
        )

    @app.post("/session")
    async def create_session(body: Optional[dict] = None):
        if body:
            try:
                a = parse_problem(body)
            except ParseError as err:
                raise QueryError("parse-error", str(err)) from None
        elif initial is not None:
            a = initial
        else:
            raise QueryError(
                "bad-request",
                "provide a problem document, or start the server with a file",
            )
        s = store.create(a)
        return _canonical({"session_id": s.session_id}, 201)

    @app.post("/session/{session_id}/assert")
    async def assert_preference(session_id: str, body: dict):
        s = store.get(session_id)
        return _canonical(s.assert_preference(body))

    @app.post("/session/{session_id}/query")
    async def query(session_id: str, body: dict):
        s = store.get(session_id)
        return _canonical(s.query(body))

    @app.post("/session/{session_id}/undo")
    async def undo(session_id: str):
        s = store.get(session_id)
        return _canonical(s.undo())

    @app.get("/session/{session_id}/state")
    async def state(session_id: str):
        s = store.get(session_id)
        return _canonical(s.state())

    @app.get("/session/{session_id}/export")
    async def export(session_id: str):
        s = store.get(session_id)
        return _canonical(s.export_problem())

    @app.get("/session/{session_id}/region")
    async def region(session_id: str):
        s = store.get(session_id)
        return _canonical(s.region())

    return app


def serve(assessment: Optional[Assessment], port: int = 8710) -> None:
    import uvicorn

    uvicorn.run(create_app(assessment), host="127.0.0.1", port=port, log_level="warning")
