"""HTTP review service for interactive sessions.

The session runs on a worker thread and blocks inside decide() whenever it
needs a verdict; this service is the other side of that handshake. A review
client lists pending suggestions with code context, posts decisions, streams
events over SSE (resumable by cursor), and reads unified diffs of everything
applied so far.
"""
from __future__ import annotations

import difflib
import threading

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from .engine import RenameRefactoring
from .execution import SessionState
from .feedback import InteractiveFeedback, make_feedback
from .minilang import CodeModel
from .orchestrator import SessionConfig, run_session, session_counters

SSE_POLL_SECONDS = 1.0


class SessionService:
    """Owns the session worker thread and the state the API reads."""

    def __init__(
        self,
        model: CodeModel,
        seed: RenameRefactoring,
        config: SessionConfig | None = None,
        gold=None,
    ):
        self.config = config or SessionConfig(
            feedback_mode="interactive", logical_clock=False
        )
        self.seed = seed
        self.feedback = make_feedback(self.config.feedback_mode, gold)
        self.state: SessionState | None = None
        self.result = None
        self.error: Exception | None = None
        self._state_ready = threading.Event()
        self._thread = threading.Thread(
            target=self._run, args=(model,), name="corename-session", daemon=True
        )

    def start(self):
        self._thread.start()
        return self

    def _run(self, model: CodeModel):
        try:
            self.result = run_session(
                model,
                self.seed,
                self.config,
                feedback=self.feedback,
                state_hook=self._adopt_state,
            )
        except Exception as exc:  # surfaces through GET /session
            self.error = exc
            if self.state is not None:
                self._state_ready.set()

    def _adopt_state(self, state: SessionState):
        self.state = state
        self._state_ready.set()

    def wait_state(self, timeout: float = 10.0) -> SessionState:
        if not self._state_ready.wait(timeout):
            raise RuntimeError("session thread did not start in time")
        if self.state is None:
            raise self.error or RuntimeError("session failed before starting")
        return self.state

    def join(self, timeout: float | None = None):
        self._thread.join(timeout)

    @property
    def status(self) -> str:
        if self.error is not None:
            return "failed"
        if self.result is not None:
            return self.result.status  # finished | aborted
        return "running"

    @property
    def done(self) -> bool:
        return self.status != "running"

    def abort(self) -> bool:
        if self.done:
            return False
        if isinstance(self.feedback, InteractiveFeedback):
            self.feedback.abort()
            return True
        return False


def create_app(service: SessionService) -> FastAPI:
    app = FastAPI(title="corename review service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.service = service

    @app.get("/session")
    def get_session():
        state = service.state
        body = {
            "status": service.status,
            "seed": service.seed.as_dict(),
            "config": service.config.as_dict(),
            "error": str(service.error) if service.error else None,
        }
        if state is not None:
            body.update(
                {
                    "applied": len(state.changes.applied),
                    "comment_edits": len(state.changes.comment_edits),
                    "suggestions": len(state.suggestions),
                    "events": len(state.events),
                    "model_version": state.model.version,
                    "counters": session_counters(
                        state.events.snapshot(),
                        getattr(state.reasoner, "calls", 0),
                    ),
                }
            )
        return body

    @app.get("/scope")
    def get_scope():
        state = service.state
        if state is None or state.scope is None:
            return {"declared": False, "history": []}
        history = [
            e.payload
            for e in state.events.snapshot()
            if e.type == "scope_updated"
        ]
        return {
            "declared": True,
            "summary": state.scope.describe(),
            "history": history,
            **state.scope.as_dict(),
        }

    @app.get("/suggestions")
    def get_suggestions():
        state = service.state
        if state is None:
            return {"pending": [], "suggestions": []}
        pending = (
            [s.id for s in service.feedback.pending()]
            if isinstance(service.feedback, InteractiveFeedback)
            else []
        )
        return {
            "pending": pending,
            "suggestions": [s.as_dict() for s in list(state.suggestions)],
        }

    @app.post("/suggestions/{suggestion_id}/decision")
    def post_decision(suggestion_id: str, body: dict):
        decision = body.get("decision")
        if decision not in (0, 1):
            return JSONResponse({"detail": "decision must be 0 or 1"}, status_code=422)
        if service.done:
            return JSONResponse({"detail": "session is over"}, status_code=410)
        if not isinstance(service.feedback, InteractiveFeedback):
            return JSONResponse(
                {"detail": "session is not interactive"}, status_code=409
            )
        state = service.state
        known = state is not None and any(
            s.id == suggestion_id for s in list(state.suggestions)
        )
        if not known:
            return JSONResponse({"detail": "unknown suggestion"}, status_code=404)
        outcome = service.feedback.post_decision(suggestion_id, decision)
        if outcome == "ok":
            return {"ok": True, "suggestion_id": suggestion_id, "decision": decision}
        if outcome == "aborted":
            return JSONResponse({"detail": "session aborted"}, status_code=410)
        return JSONResponse({"detail": "already decided"}, status_code=409)

    @app.get("/events")
    def get_events(cursor: int = 0):
        state = service.wait_state()
        log = state.events

        def stream():
            position = cursor
            while True:
                fresh = log.wait_beyond(position, SSE_POLL_SECONDS)
                for event in fresh:
                    position = event.seq + 1
                    yield (
                        f"id: {event.seq}\n"
                        f"event: {event.type}\n"
                        f"data: {event.to_json()}\n\n"
                    )
                if not fresh:
                    if service.done and len(log) <= position:
                        yield "event: end\ndata: {}\n\n"
                        return
                    yield ": keep-alive\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/changes")
    def get_changes():
        state = service.state
        if state is None:
            return {"files": [], "applied": [], "comment_edits": []}
        initial = {f.path: f.text for f in state.initial_model.layout.files}
        current = state.model.layout.files
        files = []
        for f in current:
            before = initial.get(f.path, "")
            if before == f.text:
                continue
            diff = "\n".join(
                difflib.unified_diff(
                    before.splitlines(),
                    f.text.splitlines(),
                    fromfile="a/" + f.path,
                    tofile="b/" + f.path,
                    lineterm="",
                )
            )
            files.append({"path": f.path, "diff": diff})
        return {
            "files": files,
            "applied": [r.as_dict() for r in list(state.changes.applied)],
            "comment_edits": [
                {
                    "file": e.file,
                    "line": e.line,
                    "before": e.before,
                    "after": e.after,
                    "old_name": e.old_name,
                    "new_name": e.new_name,
                }
                for e in list(state.changes.comment_edits)
            ],
        }

    @app.post("/session/abort")
    def post_abort():
        if service.done:
            return JSONResponse({"detail": "session is over"}, status_code=410)
        if not service.abort():
            return JSONResponse(
                {"detail": "session cannot be aborted"}, status_code=409
            )
        return JSONResponse({"ok": True}, status_code=202)

    return app


def serve(
    model: CodeModel,
    seed: RenameRefactoring,
    config: SessionConfig | None = None,
    host: str = "127.0.0.1",
    port: int = 8787,
    gold=None,
):
    """Blocking entry point: run the session thread plus uvicorn."""
    import uvicorn

    service = SessionService(model, seed, config, gold=gold).start()
    app = create_app(service)
    uvicorn.run(app, host=host, port=port, log_level="warning")
