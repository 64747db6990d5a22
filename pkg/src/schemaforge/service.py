"""HTTP facade over documents, schemas, truncation, mapping, and sessions.

Request bodies that carry documents are parsed with the package JSON parser
(raw bytes) and document-bearing responses use the package serializer, so
numbers keep their exact decimal form end to end.  Project and session ids
are sequential and the clock is injectable: with the replay transport the
whole server is a deterministic function of the request sequence.
"""

from __future__ import annotations

import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import document as doc_mod
from .document import DataNode, ParseError, parse_json, serialize_json
from .errors import SchemaForgeError
from .gateway import GatewayConfig, GatewayError, Transport
from .mapping import (
    MappingError,
    MappingSyntaxError,
    evaluate_mapping,
    parse_mapping,
    validate_syntax,
)
from .infer import infer_schema
from .prompts import PromptKind, build_prompt
from .schema import DIALECT_URI, validate_instance, validate_schema
from .session import (
    BlockedApplyError,
    Phase,
    SessionPhaseError,
    SessionState,
    apply as session_apply,
    new_session,
    submit as session_submit,
    user_edit,
    discard as session_discard,
)
from .truncate import TruncationConfig, truncate_document

DEFAULT_PORT = 8817


@dataclass
class Project:
    id: str
    schema: DataNode = field(default_factory=dict)
    document: DataNode = None
    sessions: list = field(default_factory=list)
    created: str = ""
    modified: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "schema": self.schema,
            "document": self.document,
            "sessions": [s.to_dict() for s in self.sessions],
            "created": self.created,
            "modified": self.modified,
        }


def _session_from_dict(raw: dict) -> SessionState:
    from .gateway import ChatMessage
    from .prompts import PromptBundle

    history = []
    for entry in raw.get("history", []):
        bundle = PromptBundle(
            kind=PromptKind(entry["kind"]),
            messages=tuple(ChatMessage(m["role"], m["content"]) for m in entry["messages"]),
        )
        history.append((bundle, entry["raw_response"]))
    state = SessionState(
        phase=Phase(raw["phase"]),
        kind=PromptKind(raw["kind"]) if raw.get("kind") else None,
        proposal=raw.get("proposal", ""),
        validation=None,
        context_path=tuple(raw["context_path"]) if raw.get("context_path") is not None else None,
        history=tuple(history),
    )
    return _revalidated(state)


def _revalidated(state: SessionState) -> SessionState:
    from dataclasses import replace

    from .session import _validate_proposal

    if state.kind is None or not state.proposal:
        return state
    return replace(state, validation=_validate_proposal(state.kind, state.proposal))


class ProjectStore:
    """One JSON file per project, written atomically; per-project locks."""

    def __init__(self, data_dir: str | Path, clock: Callable[[], float] | None = None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.clock = clock or time.time
        self._projects: dict = {}
        self._locks: dict = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.data_dir.glob("*.json")):
            project = self._read(path)
            self._projects[project.id] = project

    def _timestamp(self) -> str:
        return f"{self.clock():.0f}"

    def lock(self, project_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(project_id, threading.Lock())

    def create(self, schema: DataNode, document: DataNode) -> Project:
        with self._registry_lock:
            number = len(self._projects) + 1
            while f"proj-{number}" in self._projects:
                number += 1
            project = Project(
                id=f"proj-{number}",
                schema=schema,
                document=document,
                created=self._timestamp(),
                modified=self._timestamp(),
            )
            self._projects[project.id] = project
        self.save(project)
        return project

    def get(self, project_id: str) -> Project | None:
        return self._projects.get(project_id)

    def save(self, project: Project) -> None:
        project.modified = self._timestamp()
        path = self.data_dir / f"{project.id}.json"
        payload = serialize_json(project.to_dict(), compact=False)
        fd, tmp_name = tempfile.mkstemp(dir=self.data_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def _read(self, path: Path) -> Project:
        raw = parse_json(path.read_text(encoding="utf-8"))
        return Project(
            id=raw["id"],
            schema=raw.get("schema", {}),
            document=raw.get("document"),
            sessions=[_session_from_dict(s) for s in raw.get("sessions", [])],
            created=raw.get("created", ""),
            modified=raw.get("modified", ""),
        )


def _json_response(payload: DataNode, status_code: int = 200) -> Response:
    return Response(
        content=serialize_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, error: str, **extra) -> Response:
    return _json_response({"status": "error", "error": error, **extra}, status_code)


async def _body_json(request: Request) -> DataNode:
    raw = await request.body()
    if not raw:
        return {}
    return parse_json(raw.decode("utf-8"))


def _require(body: dict, key: str):
    if not isinstance(body, dict) or key not in body:
        raise ParseError(f"request body needs the {key!r} field")
    return body[key]


def _session_payload(project_id: str, index: int, state: SessionState) -> dict:
    return {
        "id": f"{project_id}.s{index + 1}",
        "phase": state.phase.value,
        "kind": state.kind.value if state.kind else None,
        "proposal": state.proposal,
        "validation": state.validation_dict(),
        "context_path": list(state.context_path) if state.context_path is not None else None,
    }


def create_app(
    data_dir: str | Path,
    config: GatewayConfig | None = None,
    transport: Transport | None = None,
    clock: Callable[[], float] | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="schemaforge", version="0.1.0")
    store = ProjectStore(data_dir, clock=clock)
    gateway_config = config or GatewayConfig()

    app.state.store = store
    app.state.gateway_config = gateway_config
    app.state.transport = transport

    @app.exception_handler(SchemaForgeError)
    async def _handle_package_errors(request: Request, exc: SchemaForgeError):
        if isinstance(exc, (SessionPhaseError, BlockedApplyError)):
            return JSONResponse({"status": "error", "error": str(exc)}, status_code=409)
        if isinstance(exc, GatewayError):
            return JSONResponse({"status": "error", "error": str(exc)}, status_code=502)
        return JSONResponse({"status": "error", "error": str(exc)}, status_code=422)

    @app.exception_handler(ValueError)
    async def _handle_value_errors(request: Request, exc: ValueError):
        return JSONResponse({"status": "error", "error": str(exc)}, status_code=422)

    # ------------------------------------------------------------- projects

    @app.post("/projects")
    async def create_project(request: Request):
        body = await _body_json(request)
        schema = body.get("schema", {}) if isinstance(body, dict) else {}
        document = body.get("document") if isinstance(body, dict) else None
        report = validate_schema(schema)
        if not report.valid:
            return _error(422, "invalid schema", report=report.to_dict())
        project = store.create(schema, document)
        return _json_response({"status": "ok", "project": project.to_dict()})

    @app.get("/projects/{project_id}")
    async def get_project(project_id: str):
        project = store.get(project_id)
        if project is None:
            return _error(404, f"unknown project {project_id}")
        return _json_response({"status": "ok", "project": project.to_dict()})

    @app.put("/projects/{project_id}/schema")
    async def put_schema(project_id: str, request: Request):
        project = store.get(project_id)
        if project is None:
            return _error(404, f"unknown project {project_id}")
        schema = await _body_json(request)
        report = validate_schema(schema)
        if not report.valid:
            return _error(422, "invalid schema", report=report.to_dict())
        with store.lock(project_id):
            project.schema = schema
            store.save(project)
        return _json_response({"status": "ok", "schema": schema})

    @app.put("/projects/{project_id}/document")
    async def put_document(project_id: str, request: Request, format: str = "json"):
        project = store.get(project_id)
        if project is None:
            return _error(404, f"unknown project {project_id}")
        raw = (await request.body()).decode("utf-8")
        if format == "json":
            parsed = parse_json(raw)
        elif format == "yaml":
            parsed = doc_mod.from_yaml(raw)
        elif format == "xml":
            parsed = doc_mod.from_xml(raw)
        elif format == "csv":
            delimiter = request.query_params.get("delimiter", ",")
            header = request.query_params.get("header", "true") != "false"
            parsed = doc_mod.from_csv(raw, delimiter=delimiter, header=header)
        else:
            return _error(422, f"unsupported format {format!r}")
        with store.lock(project_id):
            project.document = parsed
            store.save(project)
        return _json_response({"status": "ok", "document": parsed})

    # ------------------------------------------------------------- sessions

    def _find_session(session_id: str):
        project_id, _, suffix = session_id.partition(".s")
        project = store.get(project_id)
        if project is None or not suffix.isdigit():
            return None, None, None
        index = int(suffix) - 1
        if index < 0 or index >= len(project.sessions):
            return None, None, None
        return project, index, project.sessions[index]

    @app.post("/projects/{project_id}/sessions")
    async def create_session(project_id: str, request: Request):
        project = store.get(project_id)
        if project is None:
            return _error(404, f"unknown project {project_id}")
        body = await _body_json(request)
        kind = PromptKind(_require(body, "kind"))
        inputs = body.get("inputs", {})
        context_path = inputs.get("context_path")
        if isinstance(context_path, str):
            context_path = doc_mod.pointer_to_path(context_path)
        elif context_path is not None:
            context_path = tuple(context_path)
        truncation = TruncationConfig(**body["truncation"]) if "truncation" in body else TruncationConfig()
        with store.lock(project_id):
            bundle = build_prompt(
                kind,
                description=inputs.get("description"),
                schema=project.schema if "schema" not in inputs else inputs["schema"],
                context_path=context_path,
                document=project.document if "document" not in inputs else inputs["document"],
                target_schema=inputs.get("target_schema", project.schema if kind == PromptKind.mapping_generate else None),
                remarks=inputs.get("remarks"),
                prior_proposal=inputs.get("prior_proposal"),
                truncation=truncation,
            )
            state = session_submit(new_session(), bundle, gateway_config, transport)
            project.sessions.append(state)
            index = len(project.sessions) - 1
            store.save(project)
        return _json_response({"status": "ok", "session": _session_payload(project_id, index, state)})

    @app.post("/sessions/{session_id}/edit")
    async def edit_session(session_id: str, request: Request):
        project, index, state = _find_session(session_id)
        if state is None:
            return _error(404, f"unknown session {session_id}")
        body = await _body_json(request)
        edited = _require(body, "proposal")
        with store.lock(project.id):
            state = user_edit(state, edited)
            project.sessions[index] = state
            store.save(project)
        return _json_response({"status": "ok", "session": _session_payload(project.id, index, state)})

    @app.post("/sessions/{session_id}/apply")
    async def apply_session(session_id: str):
        project, index, state = _find_session(session_id)
        if state is None:
            return _error(404, f"unknown session {session_id}")
        with store.lock(project.id):
            state, result = session_apply(state, schema=project.schema, document=project.document)
            if state.kind in (PromptKind.schema_create, PromptKind.schema_modify):
                project.schema = result
            else:
                project.document = result
            project.sessions[index] = state
            store.save(project)
        return _json_response(
            {"status": "ok", "session": _session_payload(project.id, index, state), "result": result}
        )

    @app.post("/sessions/{session_id}/discard")
    async def discard_session(session_id: str):
        project, index, state = _find_session(session_id)
        if state is None:
            return _error(404, f"unknown session {session_id}")
        with store.lock(project.id):
            state = session_discard(state)
            project.sessions[index] = state
            store.save(project)
        return _json_response({"status": "ok", "session": _session_payload(project.id, index, state)})

    # ------------------------------------------------------------ stateless

    @app.post("/infer")
    async def infer_endpoint(request: Request):
        body = await _body_json(request)
        schema = infer_schema(_require(body, "document"))
        if isinstance(schema, dict):
            schema = {"$schema": DIALECT_URI, **schema}
        return _json_response({"status": "ok", "schema": schema})

    @app.post("/validate")
    async def validate_endpoint(request: Request):
        body = await _body_json(request)
        report = validate_instance(_require(body, "document"), _require(body, "schema"))
        return _json_response({"status": "ok", "report": report.to_dict()})

    @app.post("/truncate")
    async def truncate_endpoint(request: Request):
        body = await _body_json(request)
        document = _require(body, "document")
        cfg = TruncationConfig(**body.get("config", {}))
        outcome = truncate_document(document, cfg)
        return _json_response({"status": "ok", "document": outcome.doc, **outcome.summary()})

    @app.post("/mapping/validate")
    async def mapping_validate(request: Request):
        body = await _body_json(request)
        source = _require(body, "source")
        report = validate_syntax(source)
        return _json_response({"status": "ok", **report.to_dict(source)})

    @app.post("/mapping/evaluate")
    async def mapping_evaluate(request: Request):
        body = await _body_json(request)
        source = _require(body, "source")
        document = _require(body, "document")
        try:
            ast = parse_mapping(source)
            result = evaluate_mapping(ast, document)
        except MappingSyntaxError as exc:
            return _error(422, str(exc), kind="syntax")
        except MappingError as exc:
            return _error(422, str(exc), kind="evaluation")
        return _json_response({"status": "ok", "result": result})

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webui")

    return app
