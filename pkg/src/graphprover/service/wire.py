"""JSON encoding of engine values at the API boundary.

Formulas travel as s-expression strings.  Inside rule-argument maps a
formula is wrapped as {"f": sexpr} so it cannot be mistaken for one of the
few genuinely string-valued arguments; plain strings are also accepted on
input and parsed, except under the keys listed in _STRING_KEYS.
"""

from __future__ import annotations

from ..errors import RuleNotApplicableError
from ..formulas import Atom, Compound, OperatorTable, parse, sexpr

_STRING_KEYS = frozenset({"openedFor"})


def encode_value(value):
    if isinstance(value, (Atom, Compound)):
        return {"f": sexpr(value)}
    if isinstance(value, dict):
        return {"subst": {k: sexpr(v) for k, v in value.items()}}
    if isinstance(value, (tuple, list)):
        return [int(x) for x in value]
    return value


def encode_assignment(assignment: dict) -> dict:
    return {k: encode_value(v) for k, v in assignment.items()}


def decode_value(table: OperatorTable, key: str, value):
    if isinstance(value, bool):
        raise RuleNotApplicableError(f"argument {key!r} cannot be a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if key in _STRING_KEYS:
            return value
        return parse(table, value)
    if isinstance(value, list):
        if len(value) == 2 and all(isinstance(x, int) for x in value):
            return (value[0], value[1])
        raise RuleNotApplicableError(f"argument {key!r} is not a line range")
    if isinstance(value, dict):
        if set(value) == {"f"} and isinstance(value["f"], str):
            return parse(table, value["f"])
        if set(value) == {"subst"} and isinstance(value["subst"], dict):
            return {k: parse(table, v) for k, v in value["subst"].items()}
        if key == "substitution":
            return {k: parse(table, v) for k, v in value.items()}
        raise RuleNotApplicableError(f"argument {key!r} has an unrecognized shape")
    raise RuleNotApplicableError(f"argument {key!r} has an unrecognized shape")


def decode_assignment(table: OperatorTable, args: dict) -> dict:
    return {k: decode_value(table, k, v) for k, v in args.items()}


def fml(f) -> str | None:
    return None if f is None else sexpr(f)


def backward_snapshot(st) -> dict:
    nodes = []
    root = None
    for vid in st.deductions():
        parent = st.parent(vid)
        if parent is None:
            root = vid
        nodes.append(
            {
                "id": vid,
                "formula": sexpr(st.formula_of(vid)),
                "status": st.status(vid),
                "rule": st.rule_of(vid),
                "leafKind": st.leaf_kind(vid),
                "parent": parent,
                "children": st.children(vid),
                "hypotheses": [sexpr(h) for h in st.hypotheses(vid)],
            }
        )
    return {
        "root": root,
        "nodes": nodes,
        "openGoals": st.open_goals(),
        "complete": st.is_complete(),
    }


def fitch_snapshot(st) -> dict:
    lines = [
        {
            "index": l.index,
            "depth": l.depth,
            "formula": sexpr(l.formula),
            "rule": l.rule,
            "kind": l.kind,
            "cites": list(l.cites),
            "ranges": [list(r) for r in l.ranges],
        }
        for l in st.lines
    ]
    frames = [
        {
            "start": fr.start,
            "hypothesis": fml(fr.hypothesis),
            "target": fml(fr.target),
            "strict": fr.strict,
            "openedFor": fr.opened_for,
        }
        for fr in st.frames
    ]
    return {
        "lines": lines,
        "frames": frames,
        "subproofs": [list(r) for r in st.citable_subproofs()],
        "complete": st.complete(),
    }


def state_snapshot(session) -> dict:
    st = session.state
    body = {
        "sessionId": session.id,
        "system": session.system.name,
        "style": session.system.style,
        "goal": fml(session.goal),
        "version": session.version,
        "steps": len(st.log),
    }
    if session.system.style == "backward":
        body.update(backward_snapshot(st))
    else:
        body.update(fitch_snapshot(st))
    return body
