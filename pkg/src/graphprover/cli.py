"""Command line entry points.

`prove` and `check` call the library directly; `serve` hosts the HTTP
service.  Every flag can also be set through a GRAPHPROVER_* environment
variable, flags winning over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import EngineError
from .formulas import sexpr
from .graph import document_bytes
from .proofs import ProofState
from .registry import DEFAULT_FUEL, default_registry, prove_with_strategy


def _env(name: str, default=None):
    return os.environ.get("GRAPHPROVER_" + name, default)


def _load_extra_systems(registry, systems_dir: str | None) -> None:
    if not systems_dir:
        return
    for path in sorted(Path(systems_dir).glob("*.sys")):
        registry.load_text(path.read_text(encoding="utf-8"), replace=True)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    registry = default_registry()
    _load_extra_systems(registry, args.systems_dir)
    app = create_app(
        registry, data_dir=args.data_dir, users=args.users, static_dir=args.ui
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_prove(args) -> int:
    registry = default_registry()
    _load_extra_systems(registry, args.systems_dir)
    try:
        system = registry.get(args.system)
        goal = system.parse_formula(args.goal)
        outcome, state = prove_with_strategy(
            system, goal, strategy=args.strategy, fuel=args.fuel
        )
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"system:   {args.system}")
    print(f"goal:     {sexpr(goal)}")
    print(f"strategy: {args.strategy}")
    print(f"outcome:  {outcome.kind}" + (f" ({outcome.reason})" if outcome.reason else ""))
    print(f"steps:    {len(outcome.trace)}")
    for i, (rule, _) in enumerate(outcome.trace, start=1):
        print(f"  {i:3}. {rule}")
    if args.export:
        Path(args.export).write_text(
            document_bytes(state.to_document()), encoding="utf-8"
        )
        print(f"exported: {args.export}")
    return 0 if outcome.succeeded else 1


def _cmd_check(args) -> int:
    registry = default_registry()
    _load_extra_systems(registry, args.systems_dir)
    try:
        doc = json.loads(Path(args.document).read_text(encoding="utf-8"))
        system = registry.get(doc.get("system", args.system))
        if system.style != "backward":
            print("error: only goal-tree proof documents can be checked", file=sys.stderr)
            return 2
        state = ProofState.from_document(doc, system.table)
    except (OSError, ValueError, EngineError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 2
    violations = state.structural_violations()
    if not state.is_complete():
        violations.append(f"{len(state.open_goals())} open goal(s)")
    if violations:
        for v in violations:
            print(f"invalid: {v}")
        return 1
    print(f"valid: complete proof of {sexpr(state.formula_of(state.root))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphprover",
        description="Deductive systems as graph-transformation rules: "
        "prove goals, check proof documents, serve the HTTP API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP proof-session service")
    serve.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int, default=int(_env("PORT", "8642")))
    serve.add_argument(
        "--systems-dir",
        default=_env("SYSTEMS_DIR"),
        help="directory of extra .sys files to load at startup",
    )
    serve.add_argument(
        "--data-dir",
        default=_env("DATA_DIR"),
        help="directory for session snapshots; omit for in-memory sessions",
    )
    serve.add_argument(
        "--users",
        default=_env("USERS"),
        help="JSON file mapping bearer tokens to user names; omit to disable auth",
    )
    serve.add_argument(
        "--ui",
        default=_env("UI"),
        help="directory of web UI files to serve at /; omit for API only",
    )
    serve.set_defaults(fn=_cmd_serve)

    prove = sub.add_parser("prove", help="run a strategy against a goal")
    prove.add_argument("--system", default=_env("SYSTEM"), required=_env("SYSTEM") is None)
    prove.add_argument("--goal", default=_env("GOAL"), required=_env("GOAL") is None)
    prove.add_argument("--strategy", default=_env("STRATEGY", "auto"))
    prove.add_argument("--fuel", type=int, default=int(_env("FUEL", str(DEFAULT_FUEL))))
    prove.add_argument("--export", default=_env("EXPORT"), help="write the proof document here")
    prove.add_argument("--systems-dir", default=_env("SYSTEMS_DIR"))
    prove.set_defaults(fn=_cmd_prove)

    check = sub.add_parser("check", help="validate an exported proof document")
    check.add_argument("document")
    check.add_argument(
        "--system",
        default=_env("SYSTEM"),
        help="system to check against when the document does not name one",
    )
    check.add_argument("--systems-dir", default=_env("SYSTEMS_DIR"))
    check.set_defaults(fn=_cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
