"""Backtracking tactic combinators over rule application and undo.

A tactic denotes a stream of alternatives. Running one applies the first
alternative that works; combinators compose streams, and a failed
continuation backtracks into the remaining alternatives of everything
before it. All exploration goes through the state's mark/rollback journal,
so a failed run leaves the state exactly as it was.
"""

from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .errors import EngineError, FuelExhaustedError, UnknownRuleError
from .proofs import GOAL, ProofState
from .rules import BACKWARD, Enumerator, Rule, applicable, apply_rule, backward_branches

Tactic = Union["Atomic", "Try", "Many", "AndThen", "Some", "OrElse"]

DEFAULT_FUEL = 10_000


@dataclass(frozen=True)
class Atomic:
    """A single rule as a tactic: one alternative per applicable assignment."""

    rule: Rule | str
    enumerator: Enumerator | None = None
    avoid_cycles: bool = False


@dataclass(frozen=True)
class Try:
    """All alternatives of the body, then doing nothing. Never fails."""

    tactic: Tactic


@dataclass(frozen=True)
class Many:
    """Greedy repetition of the body until it fails or stops progressing.

    Each round commits the body's first alternative; earlier rounds are
    never revisited. Never fails.
    """

    tactic: Tactic


@dataclass(frozen=True)
class AndThen:
    """Sequencing: every alternative of the first, each continued by the
    second. A failing continuation backtracks into the first."""

    first: Tactic
    second: Tactic


@dataclass(frozen=True)
class Some:
    """At least one application: AndThen(t, Many(t))."""

    tactic: Tactic


@dataclass(frozen=True)
class OrElse:
    """Preference: AndThen(Try(first), second)."""

    first: Tactic
    second: Tactic


@dataclass(frozen=True)
class TacticOutcome:
    kind: str  # "success" | "failure" | "fuel-exhausted"
    trace: tuple[tuple[str, dict], ...] = ()
    reason: str | None = None

    @property
    def succeeded(self) -> bool:
        return self.kind == "success"


def first_open_goal(state) -> int | None:
    goals = state.open_goals()
    return goals[0] if goals else None


@dataclass
class _Env:
    fuel: int
    focus: Callable
    system: object | None = None
    _rules: dict[str, Rule] = field(default_factory=dict)

    def resolve(self, ref: Rule | str) -> Rule:
        if isinstance(ref, Rule):
            return ref
        if ref in self._rules:
            return self._rules[ref]
        if self.system is None:
            raise UnknownRuleError(f"rule name {ref!r} needs a system to resolve against")
        rule = self.system.rule(ref)
        self._rules[ref] = rule
        return rule


Trace = tuple[tuple[str, dict], ...]


def _creates_cycle(rule: Rule, st: ProofState, target: int, assignment: dict) -> bool:
    """Would some branch recreate a (formula, hypotheses) pair already on
    the path from the root to the target?"""
    seen = set()
    v: int | None = target
    while v is not None:
        seen.add(st.goal_signature(v))
        v = st.parent(v)
    base = frozenset(st.hypotheses(target))
    try:
        branches = backward_branches(rule, st, target, assignment)
    except EngineError:
        return False
    return any((goal, base | frozenset(hyps)) in seen for goal, hyps, _role in branches)


def _exec_atomic(t: Atomic, st, env: _Env) -> Iterator[Trace]:
    rule = env.resolve(t.rule)
    target = None
    if rule.style == BACKWARD:
        if not isinstance(st, ProofState):
            return
        target = env.focus(st)
        if target is None or st.status(target) != GOAL:
            return
    try:
        assignments = applicable(rule, st, target, override=t.enumerator)
    except EngineError:
        return
    if t.avoid_cycles and rule.style == BACKWARD:
        assignments = [a for a in assignments if not _creates_cycle(rule, st, target, a)]
    for asg in assignments:
        if env.fuel <= 0:
            raise FuelExhaustedError("rule application budget exhausted")
        mark = st.mark()
        try:
            apply_rule(rule, st, target, asg)
        except EngineError:
            continue
        env.fuel -= 1
        yield ((rule.name, asg),)
        st.rollback(mark)


def _exec_try(t: Try, st, env: _Env) -> Iterator[Trace]:
    yield from _execute(t.tactic, st, env)
    yield ()


def _exec_andthen(first: Tactic, second: Tactic, st, env: _Env) -> Iterator[Trace]:
    for head in _execute(first, st, env):
        for tail in _execute(second, st, env):
            yield head + tail


def _exec_many(t: Many, st, env: _Env) -> Iterator[Trace]:
    collected: Trace = ()
    start = st.mark()
    while True:
        stream = _execute(t.tactic, st, env)
        step = next(stream, None)
        stream.close()  # commit this round: drop the body's other alternatives
        if not step:
            break
        collected += step
    yield collected
    st.rollback(start)


def _execute(t: Tactic, st, env: _Env) -> Iterator[Trace]:
    if isinstance(t, Atomic):
        return _exec_atomic(t, st, env)
    if isinstance(t, Try):
        return _exec_try(t, st, env)
    if isinstance(t, Many):
        return _exec_many(t, st, env)
    if isinstance(t, AndThen):
        return _exec_andthen(t.first, t.second, st, env)
    if isinstance(t, Some):
        return _exec_andthen(t.tactic, Many(t.tactic), st, env)
    if isinstance(t, OrElse):
        return _exec_andthen(Try(t.first), t.second, st, env)
    raise TypeError(f"not a tactic: {t!r}")


def run(
    tactic: Tactic,
    state,
    system=None,
    fuel: int = DEFAULT_FUEL,
    focus: Callable = first_open_goal,
) -> TacticOutcome:
    """Apply the tactic's first working alternative to the state.

    Success leaves the applied steps in place and reports them as the
    trace. Failure and fuel exhaustion leave the state untouched.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    env = _Env(fuel=fuel, focus=focus, system=system)
    start = state.mark()
    stream = _execute(tactic, state, env)
    try:
        trace = next(stream, None)
    except FuelExhaustedError as exc:
        state.rollback(start)
        return TacticOutcome("fuel-exhausted", (), str(exc))
    if trace is None:
        state.rollback(start)
        return TacticOutcome("failure", (), "no alternative applied")
    stream.close()
    return TacticOutcome("success", trace)
