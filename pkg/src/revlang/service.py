"""HTTP/JSON stepping service behind the interactive reverse debugger.

Endpoints (JSON bodies, CORS enabled):

    GET  /healthz
    POST /sessions                {source, init?, policy?}
    GET  /sessions/{id}/state
    POST /sessions/{id}/step      {redexIndex}
    POST /sessions/{id}/back      {}
    POST /sessions/{id}/reverse   {}

Sessions are in memory, guarded per session, and evicted after an idle
TTL.  Mid-run backward stepping restores whole-state snapshots; semantic
reversal is available once a run is terminal and spawns a reverse-mode
session executing the inverted program.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .checker import store_equiv
from .engines import (
    ANNOTATED, Configuration, REVERSE, TransitionRecord,
    annotated_configuration, enabled_redexes, reverse_configuration, step,
)
from .engines.apply import subprogram_at
from .engines.redex import M_RULES, REVERSE_M_RULES
from .environments import EnvSet, RevlangError, aux_to_json, counters_to_json
from .syntax import SyntaxDiagnostic, is_terminal, parse, render, validate
from .syntax.tree import Single

SCHEMA_VERSION = 1
DEFAULT_TTL = 3600.0


class SessionError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class Session:
    id: str
    mode: str
    snapshots: list[Configuration]
    trace: list[TransitionRecord] = field(default_factory=list)
    initial_env: Optional[EnvSet] = None  # forward session's step-0 stores
    reverse_of: Optional[str] = None
    last_used: float = field(default_factory=time.monotonic)
    lock: threading.RLock = field(default_factory=threading.RLock)

    @property
    def config(self) -> Configuration:
        return self.snapshots[-1]

    @property
    def step_index(self) -> int:
        return len(self.snapshots) - 1


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_TTL):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session):
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError(404, f"no session {session_id}")
        session.last_used = time.monotonic()
        return session

    def sweep(self):
        cutoff = time.monotonic() - self.ttl
        with self._lock:
            stale = [sid for sid, s in self._sessions.items()
                     if s.last_used < cutoff]
            for sid in stale:
                del self._sessions[sid]


# --------------------------------------------------------------------------
# Views

def _redex_label(config: Configuration, redex) -> str:
    sub = subprogram_at(config.program, redex.path)
    snippet = render(sub).strip().splitlines()
    text = snippet[0] if snippet else ""
    if len(text) > 60:
        text = text[:57] + "..."
    pos = ""
    if isinstance(sub, Single):
        at = getattr(sub.stmt, "pos", None)
        if at:
            pos = f" @{at[0]}:{at[1]}"
    return f"[{redex.rule}] {text}{pos}"


def _store_view(env: EnvSet) -> dict:
    return {
        "variables": [
            {"name": name, "scope": scope, "location": loc,
             "value": env.sigma[loc]}
            for (name, scope), loc in sorted(env.gamma.items())
        ],
        "procedures": sorted(env.mu),
        "loops": sorted(env.beta),
    }


def session_view(session: Session) -> dict:
    config = session.config
    enabled = enabled_redexes(config)
    m_rules = REVERSE_M_RULES if config.mode == REVERSE else M_RULES
    view = {
        "schemaVersion": SCHEMA_VERSION,
        "sessionId": session.id,
        "mode": config.mode,
        "stepIndex": session.step_index,
        "terminal": not enabled and is_terminal(config.program),
        "renderedProgram": render(config.origin, config.table),
        "residualProgram": render(config.program, config.table),
        "stores": _store_view(config.env),
        "delta": aux_to_json(config.aux),
        "counters": counters_to_json(config.counters),
        "enabledRedexes": [
            {"index": i, "rule": r.rule, "path": list(r.path),
             "label": _redex_label(config, r),
             "identifierStep": r.rule in m_rules}
            for i, r in enumerate(enabled)
        ],
    }
    if session.mode == REVERSE and view["terminal"] and session.initial_env is not None:
        view["restored"] = bool(store_equiv(config.env, session.initial_env)
                                and config.aux.is_empty())
    return view


# --------------------------------------------------------------------------
# Operations

class Api:
    def __init__(self, store: SessionStore):
        self.store = store

    def create_session(self, body: dict) -> dict:
        source = body.get("source")
        if not isinstance(source, str):
            raise SessionError(400, "body must carry 'source'")
        init = body.get("init") or {}
        if not isinstance(init, dict) or not all(
                isinstance(v, int) for v in init.values()):
            raise SessionError(400, "'init' must map names to integers")
        try:
            program = parse(source)
        except SyntaxDiagnostic as exc:
            raise SessionError(400, f"parse error: {exc}") from exc
        diags = validate(program)
        if diags:
            raise SessionError(400, "invalid program: " + "; ".join(diags))
        config = annotated_configuration(program, init)
        session = Session(id=uuid.uuid4().hex, mode=ANNOTATED,
                          snapshots=[config], initial_env=config.env)
        self.store.add(session)
        return {"sessionId": session.id, **session_view(session)}

    def state(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            return session_view(session)

    def step(self, session_id: str, body: dict) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            config = session.config
            enabled = enabled_redexes(config)
            if not enabled:
                raise SessionError(409, "session is terminal")
            index = body.get("redexIndex", 0)
            if not isinstance(index, int) or not 0 <= index < len(enabled):
                raise SessionError(400, f"redexIndex must be in 0..{len(enabled) - 1}")
            try:
                new_config, record = step(config, enabled[index])
            except RevlangError as exc:
                raise SessionError(409, f"step failed: {exc}") from exc
            session.snapshots.append(new_config)
            session.trace.append(record)
            return {"transition": record.to_json(), **session_view(session)}

    def back(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            if session.mode == REVERSE:
                raise SessionError(409, "reverse sessions only step forward "
                                        "through the inverted program")
            if session.step_index == 0:
                raise SessionError(409, "already at the initial state")
            session.snapshots.pop()
            session.trace.pop()
            return session_view(session)

    def reverse(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            if session.mode != ANNOTATED:
                raise SessionError(409, "only annotated sessions can be reversed")
            if enabled_redexes(session.config) or not is_terminal(session.config.program):
                raise SessionError(409, "session is not terminal yet")
            reverse_config = reverse_configuration(session.config)
            child = Session(id=uuid.uuid4().hex, mode=REVERSE,
                            snapshots=[reverse_config],
                            initial_env=session.initial_env,
                            reverse_of=session.id)
            self.store.add(child)
            return {
                "reverseSessionId": child.id,
                "invertedProgram": render(reverse_config.program,
                                          reverse_config.table),
                **session_view(child),
            }


# --------------------------------------------------------------------------
# HTTP plumbing

def make_handler(api: Api, ui_dir: Optional[str]):
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "revlang"

        def log_message(self, fmt, *args):  # noqa: A003 - quiet by default
            pass

        def _send(self, status: int, payload: dict):
            data = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self._cors()
            self.end_headers()
            self.wfile.write(data)

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError as exc:
                raise SessionError(400, f"invalid JSON body: {exc}") from exc

        def do_OPTIONS(self):  # noqa: N802
            self.send_response(204)
            self._cors()
            self.end_headers()

        def do_GET(self):  # noqa: N802
            try:
                parts = [p for p in self.path.split("?")[0].split("/") if p]
                if parts == ["healthz"]:
                    self._send(200, {"ok": True, "schemaVersion": SCHEMA_VERSION})
                elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "state":
                    self._send(200, api.state(parts[1]))
                elif ui_root is not None:
                    self._static(parts)
                else:
                    self._send(404, {"error": "not found"})
            except SessionError as exc:
                self._send(exc.status, {"error": exc.message})

        def _static(self, parts: list[str]):
            rel = "/".join(parts) or "index.html"
            target = (ui_root / rel).resolve()
            if not str(target).startswith(str(ui_root)) or not target.is_file():
                self._send(404, {"error": "not found"})
                return
            data = target.read_bytes()
            ctype = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript",
                ".css": "text/css",
                ".map": "application/json",
            }.get(target.suffix, "application/octet-stream")
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self._cors()
            self.end_headers()
            self.wfile.write(data)

        def do_POST(self):  # noqa: N802
            try:
                parts = [p for p in self.path.split("?")[0].split("/") if p]
                body = self._body()
                if parts == ["sessions"]:
                    self._send(201, api.create_session(body))
                elif len(parts) == 3 and parts[0] == "sessions":
                    sid, action = parts[1], parts[2]
                    if action == "step":
                        self._send(200, api.step(sid, body))
                    elif action == "back":
                        self._send(200, api.back(sid))
                    elif action == "reverse":
                        self._send(200, api.reverse(sid))
                    else:
                        self._send(404, {"error": "not found"})
                else:
                    self._send(404, {"error": "not found"})
            except SessionError as exc:
                self._send(exc.status, {"error": exc.message})

    return Handler


def make_server(port: int = 0, ui_dir: Optional[str] = None,
                ttl: float = DEFAULT_TTL) -> ThreadingHTTPServer:
    store = SessionStore(ttl=ttl)
    api = Api(store)
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(api, ui_dir))
    server.session_store = store  # type: ignore[attr-defined]

    def sweeper():
        while not getattr(server, "_stopped", False):
            time.sleep(min(ttl, 30.0))
            store.sweep()

    thread = threading.Thread(target=sweeper, daemon=True)
    thread.start()
    return server


def serve(port: int, ui_dir: Optional[str], out, ttl: float = DEFAULT_TTL) -> None:
    server = make_server(port=port, ui_dir=ui_dir, ttl=ttl)
    host, actual_port = server.server_address[:2]
    print(f"revlang session service on http://{host}:{actual_port}/", file=out)
    if ui_dir:
        print(f"serving debugger UI from {ui_dir}", file=out)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server._stopped = True  # type: ignore[attr-defined]
        server.server_close()
