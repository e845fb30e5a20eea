"""HTTP service exposing the catalog and migration sessions.

Sessions live in memory, optionally mirrored to JSON Lines event logs.
Every mutating request carries the session version it saw; a stale
version is rejected with 409 so concurrent tabs cannot overwrite each
other. Evaluation is idempotent and does not bump the version: it
derives results without changing what the engineer has entered.

Engine results returned here are the same documents the CLI writes,
built by the same code path.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import migration
from .catalog import Catalog, load_catalog, serialize_catalog
from .errors import (
    AlreadyCommitted,
    EngineError,
    InfeasibleSelection,
    NoFeasibleCombination,
    NotEvaluated,
    ParseError,
    UnknownComponent,
    ValidationError,
    VersionConflict,
)
from .formation import serialize_formation
from .jsonio import round_floats

DEFAULT_SESSION_TTL_SECONDS = 3600.0

_STATUS_BY_ERROR = (
    (VersionConflict, 409, "version_conflict"),
    (AlreadyCommitted, 409, "already_committed"),
    (NotEvaluated, 409, "not_evaluated"),
    (InfeasibleSelection, 409, "infeasible_selection"),
    (NoFeasibleCombination, 422, "no_feasible_combination"),
    (UnknownComponent, 404, "unknown_component"),
    (ParseError, 400, "parse_error"),
    (ValidationError, 400, "validation_error"),
)


@dataclass
class ApiSession:
    """A session plus the optimistic-concurrency and expiry envelope."""

    state: migration.SessionState
    version: int = 1
    expires_at: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl_seconds: float) -> None:
        self._ttl = ttl_seconds
        self._sessions: dict[str, ApiSession] = {}
        self._lock = threading.Lock()

    def add(self, state: migration.SessionState) -> ApiSession:
        session = ApiSession(state=state, expires_at=time.monotonic() + self._ttl)
        with self._lock:
            self._sessions[state.session_id] = session
        return session

    def get(self, session_id: str) -> ApiSession:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None and session.expires_at < time.monotonic():
                del self._sessions[session_id]
                session = None
        if session is None:
            raise UnknownComponent(f"unknown or expired session {session_id!r}")
        session.expires_at = time.monotonic() + self._ttl
        return session


class CreateSessionBody(BaseModel):
    formation: dict[str, Any]


class FormationBody(BaseModel):
    version: int
    formation: dict[str, Any]


class VersionBody(BaseModel):
    version: int


class PreferencesBody(BaseModel):
    version: int
    preferences: dict[str, Any] | None = None


class EvaluateBody(BaseModel):
    preferences: dict[str, Any] | None = None


class CommitBody(BaseModel):
    version: int
    image: str
    service: str


def _check_version(session: ApiSession, seen: int) -> None:
    if seen != session.version:
        raise VersionConflict(
            f"session version is {session.version}, request carried {seen}"
        )


def _session_doc(session: ApiSession) -> dict[str, Any]:
    state = session.state
    return {
        "sessionId": state.session_id,
        "version": session.version,
        "formation": serialize_formation(state.formation),
        "pendingComponent": state.pending_component,
        "candidateImages": list(state.pending_candidates),
        "committed": {
            cid: {"image": sol.image_id, "service": sol.service_id, "score": sol.score}
            for cid, sol in sorted(state.formation.committed.items())
        },
        "historyLength": len(state.history),
    }


def create_app(
    catalog: Catalog,
    event_log_dir: str | Path | None = None,
    session_ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
) -> FastAPI:
    app = FastAPI(title="formation-genius", version="0.1.0")
    store = SessionStore(session_ttl_seconds)
    log_dir = Path(event_log_dir) if event_log_dir else None
    if log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)

    def persist(session: ApiSession) -> None:
        if log_dir:
            migration.save_event_log(session.state, log_dir / f"{session.state.session_id}.jsonl")

    @app.exception_handler(EngineError)
    async def engine_error_handler(_: Request, exc: EngineError) -> JSONResponse:
        for error_type, status, code in _STATUS_BY_ERROR:
            if isinstance(exc, error_type):
                return JSONResponse(
                    status_code=status,
                    content={"code": code, "message": str(exc), "detail": type(exc).__name__},
                )
        return JSONResponse(
            status_code=500,
            content={"code": "engine_error", "message": str(exc), "detail": type(exc).__name__},
        )

    @app.get("/catalog/images")
    def catalog_images(feature: str | None = Query(default=None)) -> dict[str, Any]:
        doc = serialize_catalog(catalog)
        images = doc["images"]
        if feature:  # an empty value means "no filter"
            wanted = {i.id for i in catalog.images_with_feature(feature)}
            images = [i for i in images if i["id"] in wanted]
        return {"images": round_floats(images)}

    @app.get("/catalog/services")
    def catalog_services() -> dict[str, Any]:
        return {"services": round_floats(serialize_catalog(catalog)["services"])}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        state = migration.create_session(catalog, body.formation, session_id=uuid.uuid4().hex)
        session = store.add(state)
        persist(session)
        return {
            "sessionId": state.session_id,
            "version": session.version,
            "warnings": list(state.formation.warnings),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            return round_floats(_session_doc(session))

    @app.put("/sessions/{session_id}/formation")
    def put_formation(session_id: str, body: FormationBody) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            _check_version(session, body.version)
            migration.redefine_formation(session.state, body.formation)
            session.version += 1
            persist(session)
            return {"version": session.version, "warnings": list(session.state.formation.warnings)}

    @app.post("/sessions/{session_id}/components/{component_id}/select")
    def select(session_id: str, component_id: str, body: VersionBody) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            _check_version(session, body.version)
            migration.select_component(session.state, component_id)
            session.version += 1
            persist(session)
            warnings = []
            if not session.state.pending_candidates:
                warnings.append("no catalog image matches the component's software feature")
            return {
                "version": session.version,
                "component": component_id,
                "candidateImages": list(session.state.pending_candidates),
                "warnings": warnings,
            }

    @app.put("/sessions/{session_id}/components/{component_id}/preferences")
    def put_preferences(session_id: str, component_id: str, body: PreferencesBody) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            _check_version(session, body.version)
            migration.set_preferences(session.state, component_id, body.preferences)
            session.version += 1
            persist(session)
            return {"version": session.version}

    @app.post("/sessions/{session_id}/components/{component_id}/evaluate")
    def evaluate(session_id: str, component_id: str, body: EvaluateBody | None = None) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            state = session.state
            if state.pending_component != component_id:
                raise NotEvaluated(
                    f"component {component_id!r} is not the pending component"
                )
            if body is not None and body.preferences is not None:
                migration.set_preferences(state, component_id, body.preferences)
            run = migration.evaluate_pending(state)
            persist(session)
            return {"version": session.version, "result": round_floats(run.result_doc)}

    @app.post("/sessions/{session_id}/components/{component_id}/commit")
    def commit(session_id: str, component_id: str, body: CommitBody) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            _check_version(session, body.version)
            state = session.state
            if state.pending_component != component_id:
                raise NotEvaluated(
                    f"component {component_id!r} is not the pending component"
                )
            migration.commit(state, body.image, body.service)
            session.version += 1
            persist(session)
            entry = state.history[-1]
            return {
                "version": session.version,
                "committed": {
                    "component": entry.component_id,
                    "image": entry.solution.image_id,
                    "service": entry.solution.service_id,
                    "score": round_floats(entry.solution.score),
                    "at": entry.at,
                },
            }

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            return {
                "sessionId": session.state.session_id,
                "history": round_floats(migration.history_doc(session.state)),
            }

    return app


def serve(
    catalog_path: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    event_log_dir: str | Path | None = None,
) -> None:
    """Load the catalog and run the service (blocking)."""
    import uvicorn

    app = create_app(load_catalog(catalog_path), event_log_dir=event_log_dir)
    uvicorn.run(app, host=host, port=port)


def _main() -> None:
    import argparse

    parser = argparse.ArgumentParser(description="Run the formation-genius HTTP API")
    parser.add_argument("--catalog", required=True)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--event-log-dir")
    args = parser.parse_args()
    serve(args.catalog, host=args.host, port=args.port, event_log_dir=args.event_log_dir)


if __name__ == "__main__":
    _main()
