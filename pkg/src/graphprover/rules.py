"""Deduction rules and their application to proof states.

A rule is declarative data: argument slots constrained by formula references,
plus either branch descriptions (backward style) or premise/conclusion
descriptions (fitch and hilbert styles).  The functions here turn that data
into concrete candidate assignments and state mutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .errors import (
    AmbiguousBranchGoalError,
    EngineError,
    NothingToUndoError,
    RuleNotApplicableError,
)
from .formulas import Atom, Compound, Formula, sexpr, subformulas
from .refspec import (
    Arg,
    RefSpec,
    ValidationIssue,
    eval_ref,
    make_context,
    validate_ref,
)
from .proofs import GOAL, LEAF_KINDS, ProofState

BACKWARD = "backward"
FITCH = "fitch"
HILBERT = "hilbert"
STYLES = (BACKWARD, FITCH, HILBERT)

# implicit binding available to argument filters, branch specs and templates
GOAL_BINDING = "goal"


# -- argument sources ----------------------------------------------------------


@dataclass(frozen=True)
class Hypotheses:
    """Enumerate the hypotheses in scope at the target goal.

    With subformulas=True the candidate pool is widened to every subformula of
    every hypothesis.  An operator constraint keeps only formulas whose
    principal operator (or atom name) matches.
    """

    operator: str | None = None
    subformulas: bool = False


@dataclass(frozen=True)
class Builtin:
    """A named assignment enumerator registered in code."""

    name: str


Enumerator = Union[Hypotheses, Builtin]


@dataclass(frozen=True)
class Make:
    """Construct a formula from a template.

    Atoms in the template whose names are bound (rule arguments, premise
    roles, or the implicit "goal") are replaced by the bound formula; other
    atoms are literal.
    """

    template: Formula


@dataclass(frozen=True)
class RuleArg:
    name: str
    spec: RefSpec | Enumerator
    where: RefSpec | None = None


@dataclass(frozen=True)
class NewBranch:
    goal: RefSpec | Make
    new_hypotheses: tuple[RefSpec | Make, ...] = ()
    role: str | None = None


@dataclass(frozen=True)
class LinePremise:
    role: str
    spec: RefSpec


@dataclass(frozen=True)
class SubproofPremise:
    role: str
    hypothesis: RefSpec
    last: RefSpec


@dataclass(frozen=True)
class CloseSpec:
    last: RefSpec
    hypothesis: RefSpec | None = None


@dataclass(frozen=True)
class Rule:
    """One deduction rule.

    Backward rules carry args plus branches (or closes_as for leaf rules).
    Fitch rules have kind line/assume/close/premise; hilbert rules have kind
    axiom/mp/nec/premise.
    """

    name: str
    style: str = BACKWARD
    args: tuple[RuleArg, ...] = ()
    branches: tuple[NewBranch, ...] = ()
    closes_as: str | None = None
    kind: str = ""
    premises: tuple[LinePremise | SubproofPremise, ...] = ()
    # a tuple means alternative conclusions (e.g. projecting either operand)
    conclusion: RefSpec | Make | tuple | None = None
    closes: CloseSpec | None = None
    opens_strict: bool = False
    closes_strict: bool = False
    crosses_strict: bool = False
    schema: Formula | None = None


# line roles are fixed by kind for the built-in hilbert rule shapes
_KIND_LINE_ROLES = {"mp": ("i", "j"), "nec": ("i",)}


def describe_rule(rule: Rule, table) -> dict:
    """Argument metadata a client needs to build an input form for the rule.

    Backward rules list their declared argument names only; clients fill
    them from enumerated candidates.  Line-style rules additionally say
    which slots are line citations, which are subproof ranges, whether a
    free formula is expected, and whether a result formula may be supplied.
    """
    info = {
        "name": rule.name,
        "style": rule.style,
        "kind": rule.kind or None,
        "args": [a.name for a in rule.args],
    }
    if rule.style == BACKWARD:
        return info
    if rule.kind in _KIND_LINE_ROLES:
        info["lines"] = list(_KIND_LINE_ROLES[rule.kind])
    else:
        info["lines"] = [p.role for p in rule.premises if isinstance(p, LinePremise)]
    info["ranges"] = [p.role for p in rule.premises if isinstance(p, SubproofPremise)]
    if rule.kind == "premise":
        info["formula"] = "formula"
    elif rule.kind == "assume" and not rule.opens_strict:
        info["formula"] = "hypothesis"
    else:
        info["formula"] = None
    info["resultFree"] = rule.conclusion is not None and not isinstance(
        rule.conclusion, (Make, Arg)
    )
    if rule.schema is not None:
        info["schema"] = sexpr(rule.schema)
        placeholders = {s.name for s in subformulas(rule.schema) if isinstance(s, Atom)}
        info["schemaAtoms"] = sorted(placeholders - set(table.constants))
    return info


# -- schema matching -----------------------------------------------------------


def instantiate_schema(template: Formula, subst: dict[str, Formula]) -> Formula:
    """Uniformly substitute atoms by name; unmapped atoms stand for themselves."""
    if isinstance(template, Atom):
        return subst.get(template.name, template)
    return Compound(template.op, tuple(instantiate_schema(x, subst) for x in template.operands))


def match_schema(
    template: Formula, f: Formula, literals: frozenset[str] = frozenset()
) -> dict[str, Formula] | None:
    """Find the substitution making the template equal f, if one exists.

    Atoms named in literals (declared constants) match only themselves."""
    subst: dict[str, Formula] = {}

    def walk(t: Formula, g: Formula) -> bool:
        if isinstance(t, Atom):
            if t.name in literals:
                return g == t
            seen = subst.get(t.name)
            if seen is None:
                subst[t.name] = g
                return True
            return seen == g
        return (
            isinstance(g, Compound)
            and g.op == t.op
            and len(g.operands) == len(t.operands)
            and all(walk(a, b) for a, b in zip(t.operands, g.operands))
        )

    return subst if walk(template, f) else None


# -- validation ----------------------------------------------------------------


def _check_spec(spec: object, names: tuple[str, ...], where: str, out: list[ValidationIssue]) -> None:
    if isinstance(spec, Make) or spec is None:
        return
    if isinstance(spec, tuple):
        for s in spec:
            _check_spec(s, names, where, out)
        return
    for issue in validate_ref(spec, names):
        out.append(ValidationIssue(issue.code, f"{where}: {issue.message}"))


def validate_rule(rule: Rule) -> list[ValidationIssue]:
    """Static checks for a rule definition; codes mirror reference validation."""
    out: list[ValidationIssue] = []
    if rule.style not in STYLES:
        out.append(ValidationIssue("UnknownStyle", f"unknown style {rule.style!r}"))
        return out
    seen: list[str] = []
    for a in rule.args:
        if a.name in seen or a.name == GOAL_BINDING:
            out.append(ValidationIssue("DuplicateName", f"argument {a.name!r} is not unique"))
        if isinstance(a.spec, (Hypotheses, Builtin)):
            pass
        else:
            _check_spec(a.spec, tuple(seen) + (GOAL_BINDING,), f"argument {a.name!r}", out)
        _check_spec(a.where, tuple(seen) + (a.name, GOAL_BINDING), f"filter on {a.name!r}", out)
        seen.append(a.name)
    arg_names = tuple(seen) + (GOAL_BINDING,)

    if rule.style == BACKWARD:
        if rule.closes_as is not None:
            if rule.branches:
                out.append(ValidationIssue("SystemFormat", "a closing rule cannot also branch"))
            if rule.closes_as not in LEAF_KINDS:
                out.append(ValidationIssue("SystemFormat", f"unknown leaf kind {rule.closes_as!r}"))
        for i, b in enumerate(rule.branches):
            _check_spec(b.goal, arg_names, f"branch {i + 1} goal", out)
            for h in b.new_hypotheses:
                _check_spec(h, arg_names, f"branch {i + 1} hypothesis", out)
        return out

    if rule.style == FITCH:
        if rule.kind not in ("line", "assume", "close", "premise"):
            out.append(ValidationIssue("SystemFormat", f"unknown fitch rule kind {rule.kind!r}"))
            return out
        roles: list[str] = []
        for p in rule.premises:
            if p.role in roles:
                out.append(ValidationIssue("DuplicateName", f"premise role {p.role!r} is not unique"))
            if isinstance(p, LinePremise):
                _check_spec(p.spec, tuple(roles), f"premise {p.role!r}", out)
                roles.append(p.role)
            else:
                _check_spec(p.hypothesis, tuple(roles), f"premise {p.role!r} hypothesis", out)
                roles.append(p.role)
                _check_spec(p.last, tuple(roles), f"premise {p.role!r} last", out)
                roles.append(p.role + "Last")
        if rule.kind == "line":
            if not rule.premises or rule.conclusion is None:
                out.append(ValidationIssue("SystemFormat", "line rules need premises and a conclusion"))
            _check_spec(rule.conclusion, tuple(roles), "conclusion", out)
        if rule.kind == "close":
            if rule.closes is None or rule.conclusion is None:
                out.append(ValidationIssue("SystemFormat", "closing rules need a subproof shape and a conclusion"))
            else:
                _check_spec(rule.closes.hypothesis, (), "closed hypothesis", out)
                _check_spec(rule.closes.last, ("hypothesis",), "closed last line", out)
                _check_spec(rule.conclusion, ("hypothesis", "last"), "conclusion", out)
        return out

    if rule.kind not in ("axiom", "mp", "nec", "premise"):
        out.append(ValidationIssue("SystemFormat", f"unknown hilbert rule kind {rule.kind!r}"))
    if rule.kind == "axiom" and rule.schema is None:
        out.append(ValidationIssue("SystemFormat", "axiom rules need a schema"))
    if rule.kind == "nec":
        _check_spec(rule.conclusion, ("premise",), "conclusion", out)
    return out


# -- assignment enumeration (backward) ------------------------------------------


def _fkey(f: Formula) -> str:
    return sexpr(f)


def _subformulas(f: Formula, acc: set) -> None:
    acc.add(f)
    if isinstance(f, Compound):
        for x in f.operands:
            _subformulas(x, acc)


def _passes_where(
    where: RefSpec | None,
    candidate: Formula,
    universe: frozenset,
    bound: dict[str, Formula],
) -> bool:
    if where is None:
        return True
    ctx = make_context(candidate, universe, bound)
    return candidate in eval_ref(where, ctx)


def _arg_candidates(
    arg: RuleArg,
    frame: Formula,
    universe: frozenset,
    hypotheses: tuple[Formula, ...],
    bound: dict[str, Formula],
) -> list[Formula]:
    if isinstance(arg.spec, Builtin):
        raise RuleNotApplicableError(
            f"argument {arg.name!r} has no standalone candidate source", rule=arg.name
        )
    if isinstance(arg.spec, Hypotheses):
        pool: set = set()
        if arg.spec.subformulas:
            for h in hypotheses:
                _subformulas(h, pool)
        else:
            pool = set(hypotheses)
        if arg.spec.operator is not None:
            op = arg.spec.operator
            pool = {f for f in pool if (f.op if isinstance(f, Compound) else f.name) == op}
        cands = sorted(pool, key=_fkey)
    else:
        ctx = make_context(frame, universe, bound)
        cands = sorted(eval_ref(arg.spec, ctx), key=_fkey)
    return [c for c in cands if _passes_where(arg.where, c, universe, bound)]


def _applicable_backward(rule: Rule, st: ProofState, target: int | None) -> list[dict]:
    if target is None or not st.graph.has_vertex(target) or st.status(target) != GOAL:
        return []
    frame = st.formula_of(target)
    hypotheses = st.hypotheses(target)
    universe = st.universe()
    out: list[dict] = []

    def walk(i: int, bound: dict[str, Formula]) -> None:
        if i == len(rule.args):
            out.append({k: v for k, v in bound.items() if k != GOAL_BINDING})
            return
        arg = rule.args[i]
        for c in _arg_candidates(arg, frame, universe, hypotheses, bound):
            bound[arg.name] = c
            walk(i + 1, bound)
            del bound[arg.name]

    walk(0, {GOAL_BINDING: frame})
    return out


def _resolve_template(template: Formula, bound: dict[str, Formula]) -> Formula:
    if isinstance(template, Atom):
        return bound.get(template.name, template)
    return Compound(template.op, tuple(_resolve_template(x, bound) for x in template.operands))


def _branch_value(
    spec: RefSpec | Make,
    frame: Formula,
    universe: frozenset,
    bound: dict[str, Formula],
    singleton: bool,
    rule_name: str,
) -> list[Formula]:
    if isinstance(spec, Make):
        return [_resolve_template(spec.template, bound)]
    ctx = make_context(frame, universe, bound)
    vals = sorted(eval_ref(spec, ctx), key=_fkey)
    if singleton and len(vals) != 1:
        raise AmbiguousBranchGoalError(
            f"branch goal of {rule_name!r} names {len(vals)} formulas instead of one",
            rule=rule_name,
            count=len(vals),
        )
    return vals


def backward_branches(
    rule: Rule, st: ProofState, target: int, assignment: dict
) -> list[tuple[Formula, list[Formula], str | None]]:
    """Resolve branch goals and new hypotheses without mutating the state."""
    frame = st.formula_of(target)
    universe = st.universe()
    bound = dict(assignment)
    bound[GOAL_BINDING] = frame
    resolved = []
    for b in rule.branches:
        goal = _branch_value(b.goal, frame, universe, bound, True, rule.name)[0]
        hyps: list[Formula] = []
        for h in b.new_hypotheses:
            for v in _branch_value(h, frame, universe, bound, False, rule.name):
                if v not in hyps:
                    hyps.append(v)
        resolved.append((goal, hyps, b.role))
    return resolved


def _validate_assignment_backward(rule: Rule, st: ProofState, target: int, assignment: dict) -> None:
    if target is None or not st.graph.has_vertex(target):
        raise RuleNotApplicableError("no such goal", rule=rule.name)
    if st.status(target) != GOAL:
        raise RuleNotApplicableError(
            f"rule {rule.name!r} needs an open goal as target", rule=rule.name
        )
    known = {a.name for a in rule.args}
    for k in assignment:
        if k not in known:
            raise RuleNotApplicableError(
                f"rule {rule.name!r} has no argument named {k!r}", rule=rule.name
            )
    frame = st.formula_of(target)
    hypotheses = st.hypotheses(target)
    universe = st.universe()
    bound: dict[str, Formula] = {GOAL_BINDING: frame}
    for arg in rule.args:
        v = assignment.get(arg.name)
        if not isinstance(v, (Atom, Compound)):
            raise RuleNotApplicableError(
                f"rule {rule.name!r} needs a formula for argument {arg.name!r}", rule=rule.name
            )
        if v not in _arg_candidates(arg, frame, universe, hypotheses, bound):
            raise RuleNotApplicableError(
                f"{sexpr(v)} does not satisfy the constraints on {arg.name!r}", rule=rule.name
            )
        bound[arg.name] = v


def _apply_backward(rule: Rule, st: ProofState, target: int, assignment: dict) -> None:
    _validate_assignment_backward(rule, st, target, assignment)
    resolved = backward_branches(rule, st, target, assignment)
    mark = st.mark()
    try:
        if not rule.branches and rule.closes_as is not None:
            st.close(target, rule.closes_as)
        else:
            st.promote(target, rule.name)
            for goal, hyps, role in resolved:
                st.add_goal_child(target, goal, hyps, role)
    except EngineError:
        st.rollback(mark)
        raise
    st.log.append((rule.name, dict(assignment), mark))


# -- builtin enumerators ---------------------------------------------------------

BUILTIN_ENUMERATORS: dict[str, Callable] = {}


def register_enumerator(name: str, fn: Callable) -> None:
    BUILTIN_ENUMERATORS[name] = fn


def _enum_atomic_goal(rule: Rule, state, target) -> list[dict]:
    """The rule's normal assignments, offered only on atomic non-falsity goals.

    Strategies use this to keep always-applicable rules (classical absurdity
    introduction) from firing on goals the structural rules should split.
    """
    if not isinstance(state, ProofState) or target is None:
        return []
    f = state.formula_of(target)
    if not isinstance(f, Atom) or f.name == "false":
        return []
    return _applicable_backward(rule, state, target)


register_enumerator("backward/atomic-goal", _enum_atomic_goal)


def _run_override(rule: Rule, state, target, override: Enumerator) -> list[dict]:
    if isinstance(override, Builtin):
        fn = BUILTIN_ENUMERATORS.get(override.name)
        if fn is None:
            raise RuleNotApplicableError(
                f"no enumerator named {override.name!r}", rule=rule.name
            )
        return fn(rule, state, target)
    raise RuleNotApplicableError(
        f"rule {rule.name!r} cannot take this enumerator override", rule=rule.name
    )


# -- public engine interface ------------------------------------------------------


def applicable(rule: Rule, state, target: int | None = None, override: Enumerator | None = None) -> list[dict]:
    """List every argument assignment under which the rule applies.

    The order is deterministic; an empty list means the rule does not apply.
    The state is never mutated.
    """
    if override is not None:
        return _run_override(rule, state, target, override)
    if rule.style == BACKWARD:
        return _applicable_backward(rule, state, target)
    from . import fitch

    return fitch.applicable_lines(rule, state)


def apply_rule(rule: Rule, state, target: int | None = None, assignment: dict | None = None) -> None:
    """Apply the rule under the given assignment; all-or-nothing on failure."""
    assignment = assignment or {}
    if rule.style == BACKWARD:
        _apply_backward(rule, state, target, assignment)
        return
    from . import fitch

    fitch.apply_line(rule, state, assignment)


def undo(state) -> tuple[str, dict]:
    """Revert the most recent rule application; returns what was undone."""
    if not state.log:
        raise NothingToUndoError("no rule applications to undo")
    name, assignment, mark = state.log[-1]
    state.rollback(mark)
    return name, assignment
