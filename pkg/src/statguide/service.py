"""HTTP/JSON session service exposing the engine to the web UI and scripts.

Responses to mutating calls always carry the full refreshed session state,
so clients never have to diff. Errors use one body shape:
``{"code": ..., "message": ..., "details": [...]}`` with 400 for bad data,
404 for unknown ids, 409 for lifecycle violations and 422 for schema
violations. Mutating endpoints honor an ``Idempotency-Key`` header: a retry
with the same key returns the stored response instead of re-executing.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Header, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .dataset import load_csv
from .engine import Session
from .errors import (
    DataError,
    LifecycleError,
    SchemaError,
    StatGuideError,
    UnknownIdError,
)
from .exporter import render_report_text
from .workflows import create_session, get_workflow, list_workflows, sample_path

DEFAULT_LISTEN = "127.0.0.1:8787"
DEFAULT_IDLE_EXPIRY = 2 * 60 * 60  # seconds
MAX_UPLOAD_BYTES = 100 * 1024 * 1024


@dataclass
class _Entry:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: float = field(default_factory=time.time)
    last_access: float = field(default_factory=time.time)
    idempotent: dict = field(default_factory=dict)  # key -> (status, body)


class SessionRegistry:
    """Token-addressed session store with lazy idle expiry."""

    def __init__(self, idle_expiry: float = DEFAULT_IDLE_EXPIRY):
        self.idle_expiry = idle_expiry
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}
        self._create_idempotent: dict[str, str] = {}  # key -> token

    def add(self, session: Session) -> None:
        with self._lock:
            self._entries[session.id] = _Entry(session)

    def get(self, token: str) -> _Entry:
        now = time.time()
        with self._lock:
            expired = [
                t for t, e in self._entries.items()
                if now - e.last_access > self.idle_expiry
            ]
            for t in expired:
                del self._entries[t]
            entry = self._entries.get(token)
            if entry is None:
                raise UnknownIdError(f"unknown session {token!r}")
            entry.last_access = now
            return entry

    def remember_create(self, key: str, token: str) -> None:
        with self._lock:
            self._create_idempotent[key] = token

    def recall_create(self, key: str) -> str | None:
        with self._lock:
            return self._create_idempotent.get(key)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def _error_response(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or []},
    )


def _load_dataset(body: dict, sample_dir: str | None):
    """Dataset from either a named sample or inline CSV text."""
    options = body.get("load_options") or {}
    kwargs = {}
    if "delimiter" in options:
        kwargs["delimiter"] = options["delimiter"]
    if "header" in options:
        kwargs["header"] = options["header"]
    if body.get("sample"):
        name = body["sample"]
        if sample_dir:
            path = os.path.join(sample_dir, f"{name}.csv")
            if not os.path.exists(path):
                raise UnknownIdError(f"unknown sample dataset {name!r}")
            return load_csv(path, **kwargs), options
        return load_csv(str(sample_path(name)), **kwargs), options
    text = body.get("csv_text")
    if not text:
        raise DataError("request needs either 'sample' or 'csv_text'")
    if len(text.encode("utf-8", errors="ignore")) > MAX_UPLOAD_BYTES:
        raise DataError("uploaded dataset exceeds the 100 MB limit")
    return load_csv(text, **kwargs), options


def create_app(idle_expiry: float = DEFAULT_IDLE_EXPIRY,
               sample_dir: str | None = None,
               ui_origin: str = "*") -> FastAPI:
    app = FastAPI(title="statguide", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[ui_origin] if ui_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = SessionRegistry(idle_expiry)
    app.state.registry = registry

    @app.exception_handler(StatGuideError)
    async def _handle_domain_error(request: Request, exc: StatGuideError):
        if isinstance(exc, UnknownIdError):
            return _error_response(404, "not_found", str(exc))
        if isinstance(exc, LifecycleError):
            return _error_response(409, "lifecycle", str(exc))
        if isinstance(exc, SchemaError):
            return _error_response(422, "schema", str(exc), exc.details)
        return _error_response(400, "bad_request", str(exc))

    def _session_payload(session: Session, extra: dict | None = None) -> dict:
        payload = {"session": session.to_dict()}
        if extra:
            payload.update(extra)
        return payload

    def _mutate(token: str, key: str | None, fn):
        """Run a mutating operation under the session lock, idempotently."""
        entry = registry.get(token)
        with entry.lock:
            if key is not None and key in entry.idempotent:
                return entry.idempotent[key]
            result = fn(entry.session)
            if key is not None:
                entry.idempotent[key] = result
            return result

    @app.get("/workflows")
    def workflows():
        return {"workflows": list_workflows()}

    @app.post("/sessions", status_code=201)
    def create(body: dict, idempotency_key: str | None = Header(default=None)):
        if idempotency_key:
            token = registry.recall_create(idempotency_key)
            if token:
                entry = registry.get(token)
                with entry.lock:
                    return _session_payload(entry.session)
        workflow_id = body.get("workflow_id")
        if not workflow_id:
            raise DataError("workflow_id is required")
        get_workflow(workflow_id)  # 404 before parsing a possibly large upload
        dataset, options = _load_dataset(body, sample_dir)
        session = create_session(workflow_id, dataset, load_options=options)
        registry.add(session)
        if idempotency_key:
            registry.remember_create(idempotency_key, session.id)
        return _session_payload(session)

    @app.get("/sessions/{token}")
    def get_session(token: str):
        entry = registry.get(token)
        with entry.lock:
            return _session_payload(entry.session)

    @app.post("/sessions/{token}/steps/{step_id}/inputs")
    def submit(token: str, step_id: str, body: dict,
               idempotency_key: str | None = Header(default=None)):
        def op(session: Session):
            outcome = session.submit_inputs(step_id, body.get("inputs", {}))
            return _session_payload(session, {"outcome": outcome})

        return _mutate(token, idempotency_key, op)

    @app.post("/sessions/{token}/steps/{step_id}/edit")
    def edit(token: str, step_id: str, body: dict,
             idempotency_key: str | None = Header(default=None)):
        def op(session: Session):
            outcome = session.edit_step(step_id, body.get("inputs", {}))
            return _session_payload(session, {"outcome": outcome})

        return _mutate(token, idempotency_key, op)

    @app.post("/sessions/{token}/dataset")
    def replace_dataset(token: str, body: dict,
                        idempotency_key: str | None = Header(default=None)):
        dataset, _ = _load_dataset(body, sample_dir)

        def op(session: Session):
            session.replace_dataset(dataset)
            return _session_payload(session)

        return _mutate(token, idempotency_key, op)

    @app.post("/sessions/{token}/steps/{step_id}/actions/{suggestion_id}")
    def apply_action(token: str, step_id: str, suggestion_id: str,
                     idempotency_key: str | None = Header(default=None)):
        def op(session: Session):
            effect = session.apply_action(step_id, suggestion_id)
            return _session_payload(session, {"effect": effect})

        return _mutate(token, idempotency_key, op)

    @app.get("/sessions/{token}/steps/{step_id}/explanation")
    def explanation(token: str, step_id: str):
        entry = registry.get(token)
        with entry.lock:
            return entry.session.get_explanation(step_id)

    @app.get("/sessions/{token}/report")
    def report(token: str, format: str = "json"):
        entry = registry.get(token)
        with entry.lock:
            doc = entry.session.export_report()
        if format == "text":
            return PlainTextResponse(render_report_text(doc))
        return doc

    @app.get("/sessions/{token}/export/model")
    def export_model(token: str):
        entry = registry.get(token)
        with entry.lock:
            return entry.session.export_model()

    return app


def serve(listen: str = DEFAULT_LISTEN, idle_expiry: float = DEFAULT_IDLE_EXPIRY,
          sample_dir: str | None = None, ui_origin: str = "*",
          static_dir: str | None = None) -> None:
    """Run the service with uvicorn; blocks until interrupted."""
    import uvicorn

    app = create_app(idle_expiry=idle_expiry, sample_dir=sample_dir,
                     ui_origin=ui_origin)
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    host, _, port = listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
