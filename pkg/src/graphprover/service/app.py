"""HTTP proof-session service.

Thin JSON layer over the library: every state transition an endpoint makes
is exactly one library call, so API-built proofs and library-built proofs
cannot diverge.  Mutating requests carry the session version they were
computed against; a mismatch is answered with 409 and no state change.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .. import authoring
from ..errors import EngineError, RuleNotApplicableError
from ..registry import DEFAULT_FUEL, default_registry, _is_complete
from ..rules import BACKWARD, apply_rule, applicable, undo
from ..tactics import TacticOutcome, first_open_goal, run
from .sessions import SessionManager
from . import wire

API = "/api/v1"


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str):
        self.status = status
        self.error = error
        self.detail = detail


class CreateSessionRequest(BaseModel):
    system: str
    goal: str


class ApplyRequest(BaseModel):
    version: int
    rule: str
    target: int | None = None
    args: dict = Field(default_factory=dict)
    resultFormula: str | None = None


class ApplicableRequest(BaseModel):
    target: int | None = None


class TacticRequest(BaseModel):
    version: int
    tactic: str | None = None
    strategy: str | None = None
    fuel: int = Field(default=DEFAULT_FUEL, ge=1)


class UndoRequest(BaseModel):
    version: int


def _apply_completing(rule, state, target, given: dict) -> dict:
    """Apply the rule, filling in arguments the request left out.

    A partial assignment is completed against the rule's own enumeration when
    exactly one candidate extends it; zero candidates re-raises the engine's
    rejection, several mean the client has to choose.  Returns the assignment
    that was actually applied, for the session log.
    """
    try:
        apply_rule(rule, state, target, given)
        return given
    except RuleNotApplicableError:
        matches = [
            c
            for c in applicable(rule, state, target)
            if all(k in c and c[k] == v for k, v in given.items())
        ]
        if not matches:
            raise
        if len(matches) > 1:
            raise ApiError(
                422,
                "AmbiguousArguments",
                f"rule {rule.name!r} applies under {len(matches)} different "
                "argument assignments; pick one via the applicable listing",
            )
        apply_rule(rule, state, target, matches[0])
        return matches[0]


def _load_users(users) -> dict[str, str] | None:
    """token -> owner; None disables authentication."""
    if users is None:
        return None
    if isinstance(users, dict):
        return dict(users)
    return json.loads(Path(users).read_text(encoding="utf-8"))


def create_app(registry=None, data_dir=None, users=None, static_dir=None) -> FastAPI:
    registry = registry or default_registry()
    tokens = _load_users(users)
    manager = SessionManager(registry, data_dir)
    app = FastAPI(title="graphprover", version="0.1.0")
    app.state.manager = manager

    def owner_of(request: Request) -> str:
        if tokens is None:
            return "anonymous"
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or token.strip() not in tokens:
            raise ApiError(401, "Unauthorized", "missing or invalid bearer token")
        return tokens[token.strip()]

    def session_of(sid: str, owner: str):
        session = manager.get(sid, owner)
        if session is None:
            raise ApiError(404, "UnknownSession", f"no session {sid!r}")
        return session

    def check_version(session, version: int) -> None:
        if version != session.version:
            raise ApiError(
                409,
                "StaleVersion",
                f"request was computed against version {version}, "
                f"session is at {session.version}",
            )

    @app.exception_handler(ApiError)
    async def api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": exc.error, "detail": exc.detail}
        )

    @app.exception_handler(EngineError)
    async def engine_error(request: Request, exc: EngineError):
        code = getattr(exc, "code", "EngineError")
        return JSONResponse(status_code=422, content={"error": code, "detail": str(exc)})

    @app.get(API + "/systems")
    def list_systems(owner: str = Depends(owner_of)):
        return {"systems": registry.catalog()}

    @app.post(API + "/sessions", status_code=201)
    def create_session(body: CreateSessionRequest, owner: str = Depends(owner_of)):
        session = manager.create(owner, body.system, body.goal)
        return {"sessionId": session.id, "state": wire.state_snapshot(session)}

    @app.get(API + "/sessions/{sid}")
    def get_session(sid: str, owner: str = Depends(owner_of)):
        session = session_of(sid, owner)
        with session.lock:
            return wire.state_snapshot(session)

    @app.post(API + "/sessions/{sid}/apply")
    def apply_endpoint(sid: str, body: ApplyRequest, owner: str = Depends(owner_of)):
        session = session_of(sid, owner)
        with session.lock:
            check_version(session, body.version)
            rule = session.system.rule(body.rule)
            assignment = wire.decode_assignment(session.system.table, body.args)
            if body.resultFormula is not None:
                assignment["result"] = session.system.parse_formula(body.resultFormula)
            target = body.target
            if rule.style == BACKWARD and target is None:
                target = first_open_goal(session.state)
            applied = _apply_completing(rule, session.state, target, assignment)
            session.record(rule.name, body.target, applied)
            manager.persist(session)
            return wire.state_snapshot(session)

    @app.post(API + "/sessions/{sid}/applicable")
    def applicable_endpoint(
        sid: str, body: ApplicableRequest, owner: str = Depends(owner_of)
    ):
        session = session_of(sid, owner)
        with session.lock:
            target = body.target
            if session.system.style == BACKWARD and target is None:
                target = first_open_goal(session.state)
            out = []
            for rule in session.system.rules():
                assignments = applicable(rule, session.state, target)
                out.append(
                    {
                        "rule": rule.name,
                        "assignments": [wire.encode_assignment(a) for a in assignments],
                    }
                )
            return {"target": target, "rules": out}

    @app.post(API + "/sessions/{sid}/tactic")
    def tactic_endpoint(sid: str, body: TacticRequest, owner: str = Depends(owner_of)):
        session = session_of(sid, owner)
        with session.lock:
            check_version(session, body.version)
            system = session.system
            if body.strategy is not None:
                tactic, full = system.strategy(body.strategy)
            elif body.tactic is not None:
                tactic = authoring.parse_tactic(
                    body.tactic, system.table, system.style, system.rule_names()
                )
                full = False
            else:
                raise ApiError(422, "MissingTactic", "provide tactic or strategy")
            state = session.state
            before = state.mark()
            outcome = run(tactic, state, system=system, fuel=body.fuel)
            if full and outcome.succeeded and not _is_complete(state):
                state.rollback(before)
                outcome = TacticOutcome("failure", (), reason="proof left unfinished")
            if outcome.succeeded and outcome.trace:
                for name, assignment in outcome.trace:
                    session.record(name, None, assignment)
                manager.persist(session)
            return {
                "outcome": outcome.kind,
                "reason": outcome.reason,
                "trace": [
                    [name, wire.encode_assignment(a)] for name, a in outcome.trace
                ],
                "state": wire.state_snapshot(session),
            }

    @app.post(API + "/sessions/{sid}/undo")
    def undo_endpoint(sid: str, body: UndoRequest, owner: str = Depends(owner_of)):
        session = session_of(sid, owner)
        with session.lock:
            check_version(session, body.version)
            undo(session.state)
            session.record_undo()
            manager.persist(session)
            return wire.state_snapshot(session)

    @app.get(API + "/sessions/{sid}/export")
    def export_endpoint(sid: str, owner: str = Depends(owner_of)):
        session = session_of(sid, owner)
        with session.lock:
            return session.state.to_document()

    if static_dir is not None:
        # mounted last so every /api/v1 route keeps precedence
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
