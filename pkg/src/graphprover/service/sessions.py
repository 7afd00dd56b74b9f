"""Proof sessions: per-session locking and file-backed persistence.

Every mutation appends to an application log and rewrites the session's
snapshot file.  A reload replays the log against a fresh state and then
compares canonical documents byte for byte, so a snapshot that no longer
matches its own log is rejected instead of trusted.
"""

from __future__ import annotations

import json
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path

from ..errors import ProofImportError
from ..formulas import sexpr
from ..graph import document_bytes
from ..rules import BACKWARD, apply_rule
from ..tactics import first_open_goal
from . import wire


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Session:
    def __init__(self, sid: str, owner: str, system, goal, state):
        self.id = sid
        self.owner = owner
        self.system = system
        self.goal = goal
        self.state = state
        self.version = 0
        self.created_at = _now()
        self.updated_at = _now()
        # [rule name, explicit target vertex or None, encoded assignment]
        self.applications: list[list] = []
        self.lock = threading.RLock()

    def record(self, rule_name: str, target: int | None, assignment: dict) -> None:
        self.applications.append([rule_name, target, wire.encode_assignment(assignment)])
        self.version += 1
        self.updated_at = _now()

    def record_undo(self) -> None:
        self.applications.pop()
        self.version += 1
        self.updated_at = _now()

    def to_file_dict(self) -> dict:
        return {
            "id": self.id,
            "owner": self.owner,
            "system": self.system.name,
            "goal": sexpr(self.goal),
            "version": self.version,
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
            "applications": self.applications,
            "document": self.state.to_document(),
        }


class SessionManager:
    """Holds live sessions; optionally persists them under data_dir."""

    def __init__(self, registry, data_dir: str | Path | None = None):
        self.registry = registry
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.data_dir.glob("session-*.json")):
                s = self._load(path)
                self._sessions[s.id] = s

    def create(self, owner: str, system_name: str, goal_text: str) -> Session:
        system = self.registry.get(system_name)
        goal = system.parse_formula(goal_text)
        session = Session(uuid.uuid4().hex, owner, system, goal, system.new_state(goal))
        with self._lock:
            self._sessions[session.id] = session
        self.persist(session)
        return session

    def get(self, sid: str, owner: str) -> Session | None:
        """The session, or None when it does not exist or belongs to someone else."""
        with self._lock:
            session = self._sessions.get(sid)
        if session is None or session.owner != owner:
            return None
        return session

    def persist(self, session: Session) -> None:
        if self.data_dir is None:
            return
        path = self.data_dir / f"session-{session.id}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(session.to_file_dict(), indent=1), encoding="utf-8")
        tmp.replace(path)

    def _load(self, path: Path) -> Session:
        raw = json.loads(path.read_text(encoding="utf-8"))
        system = self.registry.get(raw["system"])
        goal = system.parse_formula(raw["goal"])
        state = system.new_state(goal)
        for rule_name, target, encoded in raw["applications"]:
            rule = system.rule(rule_name)
            assignment = wire.decode_assignment(system.table, encoded)
            if rule.style == BACKWARD and target is None:
                target = first_open_goal(state)
            apply_rule(rule, state, target, assignment)
        replayed = document_bytes(state.to_document())
        stored = document_bytes(raw["document"])
        if replayed != stored:
            raise ProofImportError(f"session {raw['id']}: log does not replay to its snapshot")
        session = Session(raw["id"], raw["owner"], system, goal, state)
        session.version = raw["version"]
        session.created_at = raw["createdAt"]
        session.updated_at = raw["updatedAt"]
        session.applications = [list(e) for e in raw["applications"]]
        return session
