"""Read-only HTTP/JSON API over a shared immutable snapshot.

Endpoints (versioned under ``/api/v1``):

* ``GET  /api/v1/snapshot``  — topology summary for clients and the UI
* ``POST /api/v1/risk``      — score a breaking set: ``{"operations": [...], "mode": ...}``
* ``GET  /api/v1/sweep``     — per-operation single-break scores

Every non-2xx body is ``{"code": ..., "message": ...}``. The served
snapshot lives in a holder that can be swapped atomically (used for file
reloads); requests read it exactly once, so no request ever observes a
half-loaded snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import render
from .model import Snapshot
from .risk import DEFAULT_MODE, BreakingSet, RiskMode, parse_mode, risk, sweep_single_ops


class ApiError(Exception):
    """An HTTP error with a stable machine-readable code."""

    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServiceConfig:
    default_mode: RiskMode = DEFAULT_MODE
    cors_origin: str = "*"


class SnapshotHolder:
    """Atomically swappable reference to the currently served snapshot.

    Attribute assignment is atomic, so readers either see the old snapshot
    or the new one, never a mixture.
    """

    def __init__(self, snapshot: Snapshot | None = None) -> None:
        self._snapshot = snapshot

    def get(self) -> Snapshot | None:
        return self._snapshot

    def set(self, snapshot: Snapshot | None) -> None:
        self._snapshot = snapshot


def _json_response(doc: dict, status: int = 200) -> Response:
    return Response(
        content=render.to_json(doc), status_code=status, media_type="application/json"
    )


def _error_response(status: int, code: str, message: str) -> Response:
    return _json_response({"code": code, "message": message}, status=status)


def create_app(holder: SnapshotHolder, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="breakrisk", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    def current_snapshot() -> Snapshot:
        snapshot = holder.get()
        if snapshot is None or snapshot.grand_total == 0:
            raise ApiError(503, "no_snapshot", "no snapshot with traffic is loaded")
        return snapshot

    def requested_mode(raw: object) -> RiskMode:
        if raw is None:
            return config.default_mode
        if not isinstance(raw, str):
            raise ApiError(422, "unknown_mode", f"mode must be a string, got {raw!r}")
        try:
            return parse_mode(raw)
        except ValueError as exc:
            raise ApiError(422, "unknown_mode", str(exc)) from None

    @app.get("/api/v1/snapshot")
    def snapshot_summary() -> Response:
        return _json_response(render.snapshot_summary_doc(current_snapshot()))

    @app.post("/api/v1/risk")
    async def score_risk(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "invalid_request", "request body must be a JSON object") from None
        if not isinstance(body, dict):
            raise ApiError(400, "invalid_request", "request body must be a JSON object")
        operations = body.get("operations")
        if not isinstance(operations, list) or not operations:
            raise ApiError(400, "empty_operations", "'operations' must be a nonempty list")
        if not all(isinstance(op, str) and op for op in operations):
            raise ApiError(400, "invalid_request", "'operations' entries must be nonempty strings")
        mode = requested_mode(body.get("mode"))
        report = risk(current_snapshot(), BreakingSet(operations), mode)
        return _json_response(render.report_doc(report))

    @app.get("/api/v1/sweep")
    def sweep(mode: str | None = None) -> Response:
        parsed = requested_mode(mode)
        results = sweep_single_ops(current_snapshot(), parsed)
        return _json_response(render.sweep_doc(parsed.value, results))

    @app.exception_handler(ApiError)
    async def on_api_error(_request: Request, exc: ApiError) -> Response:
        return _error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(_request: Request, exc: StarletteHTTPException) -> Response:
        code = "not_found" if exc.status_code == 404 else "http_error"
        return _error_response(exc.status_code, code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(_request: Request, exc: RequestValidationError) -> Response:
        return _error_response(400, "invalid_request", str(exc))

    return app
