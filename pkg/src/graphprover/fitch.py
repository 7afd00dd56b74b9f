"""Linear proof states: fitch-style subproofs and hilbert-style line sequences.

Lines are immutable records; frames track open subproofs.  A hilbert proof is
the degenerate case that never opens a frame.  Mutations journal their
inverses so marks and rollbacks compose with the tactic interpreter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EngineError,
    InvalidConclusionError,
    NecessitationUnderHypothesisError,
    NonMatchingMPError,
    RuleNotApplicableError,
    ScopeError,
)
from .formulas import Atom, Compound, Formula, OperatorTable, sexpr
from .proofs import CheckReport, DEDUCTION_LABEL, DERIVES_LABEL, PREMISE_LABEL
from .formulas import FormulaStore
from .graph import PropertyGraph
from .refspec import eval_ref, make_context
from .rules import (
    HILBERT,
    LinePremise,
    Make,
    Rule,
    SubproofPremise,
    _resolve_template,
    instantiate_schema,
    match_schema,
    register_enumerator,
)


@dataclass(frozen=True)
class FitchLine:
    index: int
    formula: Formula
    rule: str
    cites: tuple[int, ...] = ()
    ranges: tuple[tuple[int, int], ...] = ()
    depth: int = 0
    kind: str = "derived"  # derived | hypothesis | premise | axiom


@dataclass(frozen=True)
class Frame:
    start: int  # index of the frame's first line (or where it will go)
    hypothesis: Formula | None
    strict: bool = False
    target: Formula | None = None
    opened_for: str | None = None


class FitchState:
    """A proof under construction as a sequence of scoped lines."""

    def __init__(self, table: OperatorTable, goal: Formula | None, system: str = ""):
        self.table = table
        self.system = system
        self.goal = goal
        self.lines: list[FitchLine] = []
        self.frames: list[Frame] = []
        self.closed: list[tuple[int, int, bool]] = []
        self.log: list[tuple[str, dict, tuple[int, int]]] = []
        self._journal: list = []

    # -- queries

    @property
    def depth(self) -> int:
        return len(self.frames)

    def line(self, i: int) -> FitchLine:
        if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= len(self.lines):
            raise ScopeError(f"no line numbered {i!r}", line=i)
        return self.lines[i - 1]

    def citable(self, i: int, crosses_strict: bool = False) -> bool:
        """Whether line i may be cited from the current position.

        A line is out of scope once its subproof closes, and strict subproof
        boundaries block citations from outside (at most one boundary may be
        crossed, and only by rules that say so).
        """
        if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= len(self.lines):
            return False
        if any(s <= i <= e for s, e, _ in self.closed):
            return False
        crossings = sum(1 for fr in self.frames if fr.strict and fr.start > i)
        return crossings <= (1 if crosses_strict else 0)

    def citable_lines(self, crosses_strict: bool = False) -> list[int]:
        return [i for i in range(1, len(self.lines) + 1) if self.citable(i, crosses_strict)]

    def citable_subproofs(self) -> list[tuple[int, int]]:
        """Closed hypothesis subproofs still visible from the current position."""
        out = []
        for s, e, strict in self.closed:
            if strict:
                continue
            if any(s2 <= s and e <= e2 and (s2, e2) != (s, e) for s2, e2, _ in self.closed):
                continue
            if any(fr.strict and fr.start > e for fr in self.frames):
                continue
            out.append((s, e))
        return sorted(out)

    def scope_formulas(self) -> set:
        return {self.lines[i - 1].formula for i in self.citable_lines()}

    def premise_deps(self, i: int) -> set:
        """Indices of the premise lines a line transitively depends on."""
        line = self.line(i)
        if line.kind == "premise":
            return {i}
        out: set = set()
        for j in line.cites:
            out |= self.premise_deps(j)
        for s, e in line.ranges:
            for j in range(s, e + 1):
                out |= self.premise_deps(j)
        return out

    def complete(self) -> bool:
        return self.goal is not None and any(
            l.depth == 0 and l.formula == self.goal for l in self.lines
        )

    def check_complete(self) -> CheckReport:
        violations: list[str] = []
        if self.goal is None:
            violations.append("no goal to check against")
        elif not self.complete():
            violations.append(f"goal {sexpr(self.goal)} is not derived at the top level")
        if self.frames:
            violations.append(f"{len(self.frames)} open subproof(s)")
        return CheckReport(not violations, violations)

    # -- snapshots

    def mark(self) -> tuple[int, int]:
        return len(self._journal), len(self.log)

    def rollback(self, mark: tuple[int, int]) -> None:
        while len(self._journal) > mark[0]:
            entry = self._journal.pop()
            if entry[0] == "line":
                self.lines.pop()
            elif entry[0] == "frame":
                self.frames.pop()
            else:
                self.closed.pop()
                self.frames.append(entry[1])
        del self.log[mark[1]:]

    # -- mutations (used by the rule engine)

    def append_line(
        self,
        formula: Formula,
        rule: str,
        cites: tuple[int, ...] = (),
        ranges: tuple[tuple[int, int], ...] = (),
        kind: str = "derived",
    ) -> int:
        index = len(self.lines) + 1
        self.lines.append(FitchLine(index, formula, rule, cites, ranges, self.depth, kind))
        self._journal.append(("line",))
        return index

    def open_frame(
        self,
        hypothesis: Formula | None,
        strict: bool = False,
        target: Formula | None = None,
        opened_for: str | None = None,
    ) -> Frame:
        frame = Frame(len(self.lines) + 1, hypothesis, strict, target, opened_for)
        self.frames.append(frame)
        self._journal.append(("frame",))
        return frame

    def close_frame(self) -> tuple[Frame, int, int]:
        frame = self.frames.pop()
        end = len(self.lines)
        self.closed.append((frame.start, end, frame.strict))
        self._journal.append(("closed", frame))
        return frame, frame.start, end

    # -- export

    def to_document(self) -> dict:
        """Map the line sequence onto the shared proof-graph schema."""
        g = PropertyGraph()
        store = FormulaStore(g)
        vid_of_line: dict[int, int] = {}
        for line in self.lines:
            fvid = store.intern(line.formula)
            props: dict = {"line": line.index, "depth": line.depth, "kind": line.kind}
            if line.kind == "derived":
                props["status"] = "regular"
                props["rule"] = line.rule
            else:
                props["status"] = "leaf"
                props["leafKind"] = "axiom" if line.kind == "axiom" else "hypothesis"
            vid = g.add_vertex({DEDUCTION_LABEL}, props)
            vid_of_line[line.index] = vid
            g.add_edge(vid, fvid, {DERIVES_LABEL})
            k = 0
            for cited in line.cites:
                k += 1
                g.add_edge(
                    vid,
                    vid_of_line[cited],
                    {PREMISE_LABEL},
                    {"role": f"premise{k}", "index": k},
                )
            for s, e in line.ranges:
                k += 1
                g.add_edge(
                    vid,
                    vid_of_line[s],
                    {PREMISE_LABEL},
                    {"role": f"premise{k}", "index": k, "to": e},
                )
        doc = g.to_document()
        doc["system"] = self.system
        doc["rootGoal"] = sexpr(self.goal) if self.goal is not None else ""
        return doc


def new_linear_proof(table: OperatorTable, goal, system: str = "") -> FitchState:
    from .formulas import parse

    if isinstance(goal, str):
        goal = parse(table, goal)
    return FitchState(table, goal, system)


# -- rule application ------------------------------------------------------------


def _universe(st: FitchState) -> frozenset:
    pool = st.scope_formulas()
    if st.goal is not None:
        pool.add(st.goal)
    return frozenset(pool)


def _line_fits(spec, formula: Formula, universe: frozenset, bound: dict) -> bool:
    ctx = make_context(formula, universe, bound)
    return formula in eval_ref(spec, ctx)


def _conclusion_alternatives(rule: Rule) -> tuple:
    if isinstance(rule.conclusion, tuple):
        return rule.conclusion
    return (rule.conclusion,)


def _computed_conclusions(
    rule: Rule, bound: dict, fallback: Formula | None, universe: frozenset
) -> list[Formula]:
    """What each conclusion alternative pins down, in declaration order."""
    out: list[Formula] = []
    for spec in _conclusion_alternatives(rule):
        if isinstance(spec, Make):
            v = _resolve_template(spec.template, bound)
            if v not in out:
                out.append(v)
        elif fallback is not None:
            vals = eval_ref(spec, make_context(fallback, universe, bound))
            if len(vals) == 1:
                v = next(iter(vals))
                if v not in out:
                    out.append(v)
    return out


def _conclude(
    rule: Rule,
    bound: dict,
    result: Formula | None,
    fallback: Formula | None,
    universe: frozenset,
) -> Formula:
    if result is None:
        computed = _computed_conclusions(rule, bound, fallback, universe)
        if len(computed) == 1:
            return computed[0]
        raise InvalidConclusionError(
            f"rule {rule.name!r} needs an explicit result formula here", rule=rule.name
        )
    for spec in _conclusion_alternatives(rule):
        if isinstance(spec, Make):
            if result == _resolve_template(spec.template, bound):
                return result
        elif _line_fits(spec, result, universe, bound):
            return result
    raise InvalidConclusionError(
        f"{sexpr(result)} does not follow from these premises by {rule.name!r}",
        rule=rule.name,
    )


def _take_formula(assignment: dict, key: str, rule: Rule) -> Formula:
    v = assignment.get(key)
    if not isinstance(v, (Atom, Compound)):
        raise RuleNotApplicableError(
            f"rule {rule.name!r} needs a formula for {key!r}", rule=rule.name
        )
    return v


def _take_index(assignment: dict, key: str, rule: Rule) -> int:
    v = assignment.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise RuleNotApplicableError(
            f"rule {rule.name!r} needs a line number for {key!r}", rule=rule.name
        )
    return v


def _bind_premises(
    rule: Rule, st: FitchState, assignment: dict
) -> tuple[dict, list[int], list[tuple[int, int]]]:
    universe = _universe(st)
    bound: dict = {}
    cites: list[int] = []
    ranges: list[tuple[int, int]] = []
    for p in rule.premises:
        if isinstance(p, LinePremise):
            i = _take_index(assignment, p.role, rule)
            if not st.citable(i, rule.crosses_strict):
                raise ScopeError(f"line {i} cannot be cited from here", line=i)
            c = st.line(i).formula
            if not _line_fits(p.spec, c, universe, bound):
                raise RuleNotApplicableError(
                    f"line {i} does not fit premise {p.role!r} of {rule.name!r}",
                    rule=rule.name,
                )
            bound[p.role] = c
            cites.append(i)
        else:
            v = assignment.get(p.role)
            if not (isinstance(v, (tuple, list)) and len(v) == 2):
                raise RuleNotApplicableError(
                    f"rule {rule.name!r} needs a subproof range for {p.role!r}",
                    rule=rule.name,
                )
            s, e = int(v[0]), int(v[1])
            if (s, e) not in st.citable_subproofs():
                raise ScopeError(f"lines {s}-{e} are not a citable subproof", line=s)
            hyp = st.line(s).formula
            last = st.line(e).formula
            if not _line_fits(p.hypothesis, hyp, universe, bound):
                raise RuleNotApplicableError(
                    f"subproof {s}-{e} does not fit premise {p.role!r} of {rule.name!r}",
                    rule=rule.name,
                )
            bound[p.role] = hyp
            if not _line_fits(p.last, last, universe, bound):
                raise RuleNotApplicableError(
                    f"subproof {s}-{e} does not fit premise {p.role!r} of {rule.name!r}",
                    rule=rule.name,
                )
            bound[p.role + "Last"] = last
            ranges.append((s, e))
    return bound, cites, ranges


def _apply_fitch(rule: Rule, st: FitchState, assignment: dict) -> None:
    if rule.kind == "premise":
        f = _take_formula(assignment, "formula", rule)
        if st.depth != 0 or any(l.kind != "premise" for l in st.lines):
            raise RuleNotApplicableError(
                "premises go at the top, before anything is derived", rule=rule.name
            )
        st.append_line(f, rule.name, kind="premise")
        return

    if rule.kind == "assume":
        target = assignment.get("target")
        opened_for = assignment.get("openedFor")
        if rule.opens_strict:
            st.open_frame(None, True, target, opened_for)
            return
        h = _take_formula(assignment, "hypothesis", rule)
        st.open_frame(h, False, target, opened_for)
        st.append_line(h, rule.name, kind="hypothesis")
        return

    if rule.kind == "close":
        if st.depth == 0:
            raise RuleNotApplicableError("no open subproof to close", rule=rule.name)
        frame = st.frames[-1]
        if frame.strict != rule.closes_strict:
            raise RuleNotApplicableError(
                f"rule {rule.name!r} closes a different kind of subproof", rule=rule.name
            )
        if len(st.lines) < frame.start:
            raise RuleNotApplicableError("cannot close an empty subproof", rule=rule.name)
        universe = _universe(st)
        last = st.lines[-1].formula
        bound: dict = {}
        if rule.closes.hypothesis is not None:
            if frame.hypothesis is None:
                raise RuleNotApplicableError(
                    "this subproof has no hypothesis to discharge", rule=rule.name
                )
            if not _line_fits(rule.closes.hypothesis, frame.hypothesis, universe, bound):
                raise RuleNotApplicableError(
                    f"the open hypothesis does not fit {rule.name!r}", rule=rule.name
                )
            bound["hypothesis"] = frame.hypothesis
        if not _line_fits(rule.closes.last, last, universe, bound):
            raise RuleNotApplicableError(
                f"the last line does not fit {rule.name!r}", rule=rule.name
            )
        bound["last"] = last
        conclusion = _conclude(rule, bound, assignment.get("result"), last, universe)
        _, s, e = st.close_frame()
        st.append_line(conclusion, rule.name, ranges=((s, e),))
        return

    if rule.kind != "line":
        raise RuleNotApplicableError(f"rule {rule.name!r} cannot be applied", rule=rule.name)
    bound, cites, ranges = _bind_premises(rule, st, assignment)
    fallback = bound[rule.premises[0].role] if rule.premises else None
    conclusion = _conclude(rule, bound, assignment.get("result"), fallback, _universe(st))
    st.append_line(conclusion, rule.name, tuple(cites), tuple(ranges))


def _apply_hilbert(rule: Rule, st: FitchState, assignment: dict) -> None:
    if rule.kind == "premise":
        f = _take_formula(assignment, "formula", rule)
        if any(l.kind != "premise" for l in st.lines):
            raise RuleNotApplicableError(
                "premises go at the top, before anything is derived", rule=rule.name
            )
        st.append_line(f, rule.name, kind="premise")
        return

    if rule.kind == "axiom":
        subst = assignment.get("substitution") or {}
        if not isinstance(subst, dict) or not all(
            isinstance(k, str) and isinstance(v, (Atom, Compound)) for k, v in subst.items()
        ):
            raise RuleNotApplicableError(
                "an axiom substitution maps names to formulas", rule=rule.name
            )
        fixed = [k for k in subst if k in st.table.constants]
        if fixed:
            raise RuleNotApplicableError(
                f"cannot substitute for constant(s) {', '.join(sorted(fixed))}",
                rule=rule.name,
            )
        st.append_line(instantiate_schema(rule.schema, subst), rule.name, kind="axiom")
        return

    if rule.kind == "mp":
        i = _take_index(assignment, "i", rule)
        j = _take_index(assignment, "j", rule)
        for k in (i, j):
            if not st.citable(k):
                raise ScopeError(f"line {k} cannot be cited from here", line=k)
        fi, fj = st.line(i).formula, st.line(j).formula
        if isinstance(fi, Compound) and fi.op == "->" and fi.operands[0] == fj:
            conclusion, cites = fi.operands[1], (i, j)
        elif isinstance(fj, Compound) and fj.op == "->" and fj.operands[0] == fi:
            conclusion, cites = fj.operands[1], (j, i)
        else:
            raise NonMatchingMPError(
                f"lines {i} and {j} are not an implication and its antecedent",
                rule=rule.name,
            )
        st.append_line(conclusion, rule.name, cites)
        return

    if rule.kind == "nec":
        i = _take_index(assignment, "i", rule)
        if not st.citable(i):
            raise ScopeError(f"line {i} cannot be cited from here", line=i)
        deps = st.premise_deps(i)
        if deps:
            raise NecessitationUnderHypothesisError(
                f"line {i} still depends on premise line(s) {sorted(deps)}",
                rule=rule.name,
            )
        bound = {"premise": st.line(i).formula}
        conclusion = _conclude(rule, bound, assignment.get("result"), None, _universe(st))
        st.append_line(conclusion, rule.name, (i,))
        return

    raise RuleNotApplicableError(f"rule {rule.name!r} cannot be applied", rule=rule.name)


def apply_line(rule: Rule, st: FitchState, assignment: dict) -> None:
    """Apply a fitch or hilbert rule; all-or-nothing on failure."""
    if not isinstance(st, FitchState):
        raise RuleNotApplicableError(
            f"rule {rule.name!r} applies to line-style proofs", rule=rule.name
        )
    mark = st.mark()
    try:
        if rule.style == HILBERT:
            _apply_hilbert(rule, st, assignment)
        else:
            _apply_fitch(rule, st, assignment)
    except EngineError:
        st.rollback(mark)
        raise
    st.log.append((rule.name, dict(assignment), mark))


# -- applicability ----------------------------------------------------------------


def _result_choices(rule: Rule, st: FitchState, bound: dict, fallback) -> list[dict]:
    computed = _computed_conclusions(rule, bound, fallback, _universe(st))
    if not computed:
        return [{}]
    return [{"result": v} for v in computed]


def _applicable_fitch(rule: Rule, st: FitchState) -> list[dict]:
    if rule.kind == "premise":
        ok = st.depth == 0 and all(l.kind == "premise" for l in st.lines)
        return [{}] if ok else []
    if rule.kind == "assume":
        return [{}]
    if rule.kind == "close":
        if st.depth == 0:
            return []
        frame = st.frames[-1]
        if frame.strict != rule.closes_strict or len(st.lines) < frame.start:
            return []
        universe = _universe(st)
        last = st.lines[-1].formula
        bound: dict = {}
        if rule.closes.hypothesis is not None:
            if frame.hypothesis is None:
                return []
            if not _line_fits(rule.closes.hypothesis, frame.hypothesis, universe, bound):
                return []
            bound["hypothesis"] = frame.hypothesis
        if not _line_fits(rule.closes.last, last, universe, bound):
            return []
        bound["last"] = last
        return [dict(extra) for extra in _result_choices(rule, st, bound, last)]

    universe = _universe(st)
    out: list[dict] = []

    def walk(k: int, bound: dict, asg: dict) -> None:
        if k == len(rule.premises):
            fallback = bound[rule.premises[0].role] if rule.premises else None
            for extra in _result_choices(rule, st, bound, fallback):
                out.append(asg | extra)
            return
        p = rule.premises[k]
        if isinstance(p, LinePremise):
            for i in st.citable_lines(rule.crosses_strict):
                c = st.line(i).formula
                if _line_fits(p.spec, c, universe, bound):
                    walk(k + 1, bound | {p.role: c}, asg | {p.role: i})
        else:
            for s, e in st.citable_subproofs():
                hyp, lastf = st.line(s).formula, st.line(e).formula
                if not _line_fits(p.hypothesis, hyp, universe, bound):
                    continue
                inner = bound | {p.role: hyp}
                if not _line_fits(p.last, lastf, universe, inner):
                    continue
                walk(k + 1, inner | {p.role + "Last": lastf}, asg | {p.role: (s, e)})

    walk(0, {}, {})
    return out


def _applicable_hilbert(rule: Rule, st: FitchState) -> list[dict]:
    if rule.kind == "premise":
        return [{}] if all(l.kind == "premise" for l in st.lines) else []
    if rule.kind == "axiom":
        if st.goal is None:
            return []
        subst = match_schema(rule.schema, st.goal, frozenset(st.table.constants))
        return [{"substitution": subst}] if subst is not None else []
    if rule.kind == "mp":
        out = []
        for i in st.citable_lines():
            fi = st.line(i).formula
            if not (isinstance(fi, Compound) and fi.op == "->"):
                continue
            for j in st.citable_lines():
                if j != i and st.line(j).formula == fi.operands[0]:
                    out.append({"i": i, "j": j})
        return out
    if rule.kind == "nec":
        return [{"i": i} for i in st.citable_lines() if not st.premise_deps(i)]
    return []


def applicable_lines(rule: Rule, st: FitchState) -> list[dict]:
    if not isinstance(st, FitchState):
        return []
    if rule.style == HILBERT:
        return _applicable_hilbert(rule, st)
    return _applicable_fitch(rule, st)


# -- strategy enumerators ----------------------------------------------------------
#
# The automatic strategies drive rules through named enumerators that propose
# one worthwhile assignment at a time.  They assume the standard connective
# names used by the built-in systems.

_FALSE = Atom("false")


def _current_target(st: FitchState) -> Formula | None:
    if st.frames:
        return st.frames[-1].target
    return st.goal


def _frame_lines(st: FitchState) -> list[FitchLine]:
    if not st.frames:
        return [l for l in st.lines if l.depth == 0]
    start = st.frames[-1].start
    return [l for l in st.lines if l.index >= start]


def _frame_ready(st: FitchState) -> bool:
    """Whether the innermost subproof is ready to close.

    Closing concludes from the subproof's last line, so while one is ready
    no other step may append to it or open a new one, or the pending
    conclusion would be buried.
    """
    if not st.frames:
        return False
    fr = st.frames[-1]
    if fr.strict or len(st.lines) < fr.start:
        return False
    last = st.lines[-1].formula
    if fr.opened_for in ("impI", "antecedent") and fr.target is not None:
        return last == fr.target
    if fr.opened_for == "reductio":
        return last == _FALSE
    return False


def _enum_close_ready(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if not st.frames:
        return []
    fr = st.frames[-1]
    if fr.strict or fr.opened_for not in ("impI", "antecedent") or fr.target is None:
        return []
    if len(st.lines) < fr.start or st.lines[-1].formula != fr.target:
        return []
    return [{}]


def _enum_close_reductio(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if not st.frames:
        return []
    fr = st.frames[-1]
    if fr.strict or fr.opened_for != "reductio":
        return []
    if len(st.lines) < fr.start or st.lines[-1].formula != _FALSE:
        return []
    return [{}]


def _enum_reit_target(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if not st.frames or _frame_ready(st):
        return []
    t = _current_target(st)
    if t is None:
        return []
    lines = _frame_lines(st)
    if lines and lines[-1].formula == t:
        return []
    for i in st.citable_lines():
        if st.line(i).formula == t and i != len(st.lines):
            return [{"source": i}]
    return []


def _enum_decompose_target(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    t = _current_target(st)
    if not isinstance(t, Compound) or t.op != "->":
        return []
    ant, cons = t.operands
    if any(fr.hypothesis == ant and fr.target == cons for fr in st.frames):
        return []
    return [{"hypothesis": ant, "target": cons, "openedFor": "impI"}]


def _enum_forward_impE(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    scope = st.scope_formulas()
    out = []
    for i in st.citable_lines():
        fi = st.line(i).formula
        if not (isinstance(fi, Compound) and fi.op == "->") or fi.operands[1] in scope:
            continue
        for j in st.citable_lines():
            if st.line(j).formula == fi.operands[0]:
                out.append({"implication": i, "antecedent": j})
                break
    return out


def _enum_forward_and(operand: int):
    def enum(rule: Rule, st: FitchState, target) -> list[dict]:
        if st.complete():
            return []
        if _frame_ready(st):
            return []
        scope = st.scope_formulas()
        out = []
        for i in st.citable_lines():
            fi = st.line(i).formula
            if isinstance(fi, Compound) and fi.op == "and" and fi.operands[operand - 1] not in scope:
                out.append({"conjunction": i, "result": fi.operands[operand - 1]})
        return out

    return enum


def _enum_target_andI(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    t = _current_target(st)
    scope = st.scope_formulas()
    if not isinstance(t, Compound) or t.op != "and" or t in scope:
        return []
    left = next((i for i in st.citable_lines() if st.line(i).formula == t.operands[0]), None)
    right = next((i for i in st.citable_lines() if st.line(i).formula == t.operands[1]), None)
    if left is None or right is None:
        return []
    return [{"left": left, "right": right}]


def _enum_target_orI(operand: int):
    def enum(rule: Rule, st: FitchState, target) -> list[dict]:
        if st.complete():
            return []
        if _frame_ready(st):
            return []
        t = _current_target(st)
        scope = st.scope_formulas()
        if not isinstance(t, Compound) or t.op != "or" or t in scope:
            return []
        i = next(
            (i for i in st.citable_lines() if st.line(i).formula == t.operands[operand - 1]),
            None,
        )
        return [] if i is None else [{"disjunct": i, "result": t}]

    return enum


def _enum_antecedent_andI(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    scope = st.scope_formulas()
    out = []
    for i in st.citable_lines():
        fi = st.line(i).formula
        if not (isinstance(fi, Compound) and fi.op == "->") or fi.operands[1] in scope:
            continue
        ant = fi.operands[0]
        if not (isinstance(ant, Compound) and ant.op == "and") or ant in scope:
            continue
        left = next((j for j in st.citable_lines() if st.line(j).formula == ant.operands[0]), None)
        right = next((j for j in st.citable_lines() if st.line(j).formula == ant.operands[1]), None)
        if left is not None and right is not None:
            out.append({"left": left, "right": right})
    return out


def _enum_absurd_target(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    t = _current_target(st)
    scope = st.scope_formulas()
    if t is None or t == _FALSE or t in scope:
        return []
    i = next((i for i in st.citable_lines() if st.line(i).formula == _FALSE), None)
    return [] if i is None else [{"falsum": i, "result": t}]


def _enum_reductio(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    t = _current_target(st)
    if not isinstance(t, Atom) or t == _FALSE:
        return []
    negated = Compound("->", (t, _FALSE))
    if any(fr.hypothesis == negated and fr.target == _FALSE for fr in st.frames):
        return []
    return [{"hypothesis": negated, "target": _FALSE, "openedFor": "reductio"}]


def _enum_prove_antecedent(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete():
        return []
    if _frame_ready(st):
        return []
    scope = st.scope_formulas()
    out = []
    for i in st.citable_lines():
        fi = st.line(i).formula
        if not (isinstance(fi, Compound) and fi.op == "->") or fi.operands[0] in scope:
            continue
        ant = fi.operands[0]
        if not (isinstance(ant, Compound) and ant.op == "->"):
            continue
        if any(fr.hypothesis == ant.operands[0] and fr.target == ant.operands[1] for fr in st.frames):
            continue
        out.append(
            {"hypothesis": ant.operands[0], "target": ant.operands[1], "openedFor": "antecedent"}
        )
    return out


def _enum_axiom_to_goal(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.goal is None or st.complete():
        return []
    subst = match_schema(rule.schema, st.goal, frozenset(st.table.constants))
    return [{"substitution": subst}] if subst is not None else []


def _enum_nec_to_goal(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.complete() or not (isinstance(st.goal, Compound) and st.goal.op == "box"):
        return []
    body = st.goal.operands[0]
    for i in st.citable_lines():
        if st.line(i).formula == body and not st.premise_deps(i):
            return [{"i": i}]
    return []


def _enum_mp_to_goal(rule: Rule, st: FitchState, target) -> list[dict]:
    if st.goal is None or st.complete():
        return []
    for i in st.citable_lines():
        fi = st.line(i).formula
        if not (isinstance(fi, Compound) and fi.op == "->" and fi.operands[1] == st.goal):
            continue
        for j in st.citable_lines():
            if st.line(j).formula == fi.operands[0]:
                return [{"i": i, "j": j}]
    return []


register_enumerator("fitch/close-ready", _enum_close_ready)
register_enumerator("fitch/close-reductio", _enum_close_reductio)
register_enumerator("fitch/reit-target", _enum_reit_target)
register_enumerator("fitch/decompose-target", _enum_decompose_target)
register_enumerator("fitch/forward-impE", _enum_forward_impE)
register_enumerator("fitch/forward-and-left", _enum_forward_and(1))
register_enumerator("fitch/forward-and-right", _enum_forward_and(2))
register_enumerator("fitch/target-andI", _enum_target_andI)
register_enumerator("fitch/target-orI1", _enum_target_orI(1))
register_enumerator("fitch/target-orI2", _enum_target_orI(2))
register_enumerator("fitch/antecedent-andI", _enum_antecedent_andI)
register_enumerator("fitch/absurd-target", _enum_absurd_target)
register_enumerator("fitch/reductio", _enum_reductio)
register_enumerator("fitch/prove-antecedent", _enum_prove_antecedent)
register_enumerator("hilbert/axiom-to-goal", _enum_axiom_to_goal)
register_enumerator("hilbert/nec-to-goal", _enum_nec_to_goal)
register_enumerator("hilbert/mp-to-goal", _enum_mp_to_goal)
