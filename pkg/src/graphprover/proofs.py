"""Goal-directed proof states encoded as property graphs.

A proof lives in one graph together with its interned formulas. Each proof
step is a deduction vertex whose ``derives`` edge points at the formula it
establishes; ``premise`` edges connect a rule application to the child
deductions it depends on, ordered and role-labeled; ``hypothesis`` edges
record which formulas are assumable at a given node. Node statuses partition
deductions into open goals, closed leaves, and rule applications in between.

Open goals are placeholder deduction vertices with status "goal". The goal
ordering is depth-first preorder over the premise tree, so expanding a goal
splices its children into the position the goal occupied.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    NotAHypothesisError,
    ProofImportError,
    RuleNotApplicableError,
)
from .formulas import (
    FORMULA_LABEL,
    Formula,
    FormulaStore,
    OperatorTable,
    parse,
    render,
)
from .graph import PropertyGraph

DEDUCTION_LABEL = "Deduction"
DERIVES_LABEL = "derives"
PREMISE_LABEL = "premise"
HYPOTHESIS_LABEL = "hypothesis"

STATUS_KEY = "status"
RULE_KEY = "rule"
LEAF_KIND_KEY = "leafKind"
ROLE_KEY = "role"
INDEX_KEY = "index"

GOAL = "goal"
LEAF = "leaf"
REGULAR = "regular"

LEAF_KINDS = ("hypothesis", "axiom")


@dataclass
class CheckReport:
    """Outcome of a completeness check; complete iff violations is empty."""

    complete: bool
    violations: list[str] = field(default_factory=list)


class ProofState:
    """One backward proof under construction.

    Single-writer: the owning session serializes mutations. Exports are
    plain dicts and may be read concurrently.
    """

    def __init__(self, table: OperatorTable, goal: Formula, system: str = ""):
        self.table = table
        self.system = system
        self.graph = PropertyGraph()
        self.store = FormulaStore(self.graph)
        goal_vid = self.store.intern(goal)
        self.root = self.graph.add_vertex({DEDUCTION_LABEL}, {STATUS_KEY: GOAL})
        self.graph.add_edge(self.root, goal_vid, {DERIVES_LABEL})
        # rule-application history: (rule name, assignment, mark before applying)
        self.log: list[tuple[str, dict, tuple[int, int, int]]] = []

    # -- queries

    def deductions(self) -> list[int]:
        g = self.graph
        return [v for v in g.vertices() if DEDUCTION_LABEL in g.vertex_labels(v)]

    def status(self, vid: int) -> str:
        return str(self.graph.vertex_props(vid).get(STATUS_KEY, ""))

    def rule_of(self, vid: int) -> str | None:
        value = self.graph.vertex_props(vid).get(RULE_KEY)
        return value if isinstance(value, str) else None

    def leaf_kind(self, vid: int) -> str | None:
        value = self.graph.vertex_props(vid).get(LEAF_KIND_KEY)
        return value if isinstance(value, str) else None

    def formula_vid_of(self, vid: int) -> int:
        g = self.graph
        targets = [
            g.edge_ends(e)[1] for e in g.out_edges(vid) if DERIVES_LABEL in g.edge_labels(e)
        ]
        if len(targets) != 1:
            raise ProofImportError(
                f"deduction vertex {vid} has {len(targets)} derives edges (expected 1)"
            )
        return targets[0]

    def formula_of(self, vid: int) -> Formula:
        return self.store.formula_at(self.formula_vid_of(vid))

    def children(self, vid: int) -> list[int]:
        """Premise children in declared order."""
        g = self.graph
        out = []
        for e in g.out_edges(vid):
            if PREMISE_LABEL in g.edge_labels(e):
                idx = g.edge_props(e).get(INDEX_KEY)
                out.append((idx if isinstance(idx, int) else 0, e, g.edge_ends(e)[1]))
        return [dst for _idx, _e, dst in sorted(out)]

    def parent(self, vid: int) -> int | None:
        g = self.graph
        for e in g.in_edges(vid):
            if PREMISE_LABEL in g.edge_labels(e):
                return g.edge_ends(e)[0]
        return None

    def hypotheses(self, vid: int) -> list[Formula]:
        """In-scope hypotheses in introduction order."""
        g = self.graph
        return [
            self.store.formula_at(g.edge_ends(e)[1])
            for e in g.out_edges(vid)
            if HYPOTHESIS_LABEL in g.edge_labels(e)
        ]

    def open_goals(self) -> list[int]:
        """Open goal vertices in depth-first preorder over the premise tree."""
        order: list[int] = []
        stack = [self.root]
        while stack:
            vid = stack.pop()
            if self.status(vid) == GOAL:
                order.append(vid)
            stack.extend(reversed(self.children(vid)))
        return order

    def is_complete(self) -> bool:
        return not self.open_goals()

    def universe(self) -> frozenset[Formula]:
        return self.store.universe()

    def goal_signature(self, vid: int) -> tuple[Formula, frozenset[Formula]]:
        """(formula, hypothesis set) pair used by cycle detection."""
        return self.formula_of(vid), frozenset(self.hypotheses(vid))

    # -- mutations

    def add_goal_child(
        self,
        parent: int,
        formula: Formula,
        new_hypotheses: tuple[Formula, ...] | list[Formula] = (),
        role: str | None = None,
    ) -> int:
        """Create an open child goal; hypotheses in scope at the parent carry over."""
        if self.status(parent) != REGULAR:
            raise RuleNotApplicableError(
                f"cannot attach a branch to a vertex with status {self.status(parent)!r}"
            )
        index = len(self.children(parent)) + 1
        hyps = list(self.hypotheses(parent))
        for nh in new_hypotheses:
            if nh not in hyps:
                hyps.append(nh)
        child = self.graph.add_vertex({DEDUCTION_LABEL}, {STATUS_KEY: GOAL})
        self.graph.add_edge(child, self.store.intern(formula), {DERIVES_LABEL})
        for h in hyps:
            self.graph.add_edge(child, self.store.intern(h), {HYPOTHESIS_LABEL})
        self.graph.add_edge(
            parent,
            child,
            {PREMISE_LABEL},
            {ROLE_KEY: role if role is not None else f"premise{index}", INDEX_KEY: index},
        )
        return child

    def promote(self, vid: int, rule_name: str) -> None:
        """Turn an open goal into a rule application awaiting its branches."""
        if self.status(vid) != GOAL:
            raise RuleNotApplicableError(f"vertex {vid} is not an open goal")
        self.graph.set_vertex_prop(vid, STATUS_KEY, REGULAR)
        self.graph.set_vertex_prop(vid, RULE_KEY, rule_name)

    def close(self, vid: int, leaf_kind: str) -> None:
        """Turn an open goal into a leaf."""
        if self.status(vid) != GOAL:
            raise RuleNotApplicableError(f"vertex {vid} is not an open goal")
        self.graph.set_vertex_prop(vid, STATUS_KEY, LEAF)
        self.graph.set_vertex_prop(vid, LEAF_KIND_KEY, leaf_kind)

    def close_goal_with_hypothesis(self, vid: int) -> None:
        if self.status(vid) != GOAL:
            raise RuleNotApplicableError(f"vertex {vid} is not an open goal")
        if self.formula_of(vid) not in self.hypotheses(vid):
            raise NotAHypothesisError(
                "goal formula is not among the hypotheses in scope"
            )
        self.close(vid, "hypothesis")

    # -- snapshots

    def mark(self) -> tuple[int, int, int]:
        return self.graph.mark(), self.store.mark(), len(self.log)

    def rollback(self, mark: tuple[int, int, int]) -> None:
        self.graph.undo_to(mark[0])
        self.store.rollback(mark[1])
        del self.log[mark[2]:]

    # -- validation

    def structural_violations(self, branch_counts: dict[str, int] | None = None) -> list[str]:
        """Graph-wide invariant check; tolerant of corrupted structure."""
        g = self.graph
        out: list[str] = []
        deds = set(self.deductions())
        if self.root not in deds:
            return [f"root vertex {self.root} is not a deduction vertex"]

        for vid in sorted(deds):
            derives = [e for e in g.out_edges(vid) if DERIVES_LABEL in g.edge_labels(e)]
            if len(derives) != 1:
                out.append(
                    f"deduction vertex {vid} has {len(derives)} derives edges (expected 1)"
                )
            for e in derives:
                dst = g.edge_ends(e)[1]
                if FORMULA_LABEL not in g.vertex_labels(dst):
                    out.append(f"derives edge {e} does not point at a formula vertex")
            for e in g.out_edges(vid):
                if HYPOTHESIS_LABEL in g.edge_labels(e):
                    dst = g.edge_ends(e)[1]
                    if FORMULA_LABEL not in g.vertex_labels(dst):
                        out.append(f"hypothesis edge {e} does not point at a formula vertex")

        # premise edges must join deduction vertices and form a tree rooted at root
        parents: dict[int, int] = {}
        for eid in g.edges():
            if PREMISE_LABEL not in g.edge_labels(eid):
                continue
            src, dst = g.edge_ends(eid)
            if src not in deds or dst not in deds:
                out.append(f"premise edge {eid} does not join two deduction vertices")
                continue
            if dst in parents:
                out.append(f"deduction vertex {dst} has more than one parent")
            parents[dst] = src
        if self.root in parents:
            out.append("root deduction vertex has an incoming premise edge")
        reachable: set[int] = set()
        stack = [self.root]
        while stack:
            vid = stack.pop()
            if vid in reachable:
                continue
            reachable.add(vid)
            stack.extend(self.children(vid))
        unreachable = deds - reachable
        if unreachable:
            out.append(
                f"{len(unreachable)} deduction vertices unreachable from the root"
            )

        for vid in sorted(deds):
            status = self.status(vid)
            kids = self.children(vid)
            rule = self.rule_of(vid)
            kind = self.leaf_kind(vid)
            if status == GOAL:
                if kids:
                    out.append(f"open goal {vid} has premise children")
                if rule or kind:
                    out.append(f"open goal {vid} carries a rule or leaf kind")
            elif status == LEAF:
                if kids:
                    out.append(f"leaf {vid} has premise children")
                if kind not in LEAF_KINDS:
                    out.append(f"leaf {vid} has unknown leaf kind {kind!r}")
            elif status == REGULAR:
                if rule is None:
                    out.append(f"rule application {vid} is missing its rule name")
                elif branch_counts is not None and rule in branch_counts:
                    if len(kids) != branch_counts[rule]:
                        out.append(
                            f"rule application {vid} ({rule}) has {len(kids)} premises, "
                            f"expected {branch_counts[rule]}"
                        )
            else:
                out.append(f"deduction vertex {vid} has unknown status {status!r}")

        return out

    def check_complete(self, branch_counts: dict[str, int] | None = None) -> CheckReport:
        violations = self.structural_violations(branch_counts)
        n_open = sum(1 for vid in self.deductions() if self.status(vid) == GOAL)
        if n_open:
            violations.append(f"{n_open} open goal" + ("s" if n_open > 1 else ""))
        return CheckReport(not violations, violations)

    # -- documents

    def to_document(self) -> dict:
        doc = self.graph.to_document()
        doc["system"] = self.system
        doc["rootGoal"] = render(self.table, self.formula_of(self.root))
        return doc

    @classmethod
    def from_document(cls, doc: dict, table: OperatorTable) -> "ProofState":
        """Rebuild a proof from a document, re-validating every invariant."""
        if not isinstance(doc, dict):
            raise ProofImportError("proof document must be an object")
        system = doc.get("system")
        root_goal = doc.get("rootGoal")
        if not isinstance(system, str) or not isinstance(root_goal, str):
            raise ProofImportError("proof document is missing system or rootGoal")
        graph, _ = PropertyGraph.from_document(doc)
        st = cls.__new__(cls)
        st.table = table
        st.system = system
        st.graph = graph
        st.store = FormulaStore.rebuild(graph)
        st.log = []
        roots = [
            vid
            for vid in graph.vertices()
            if DEDUCTION_LABEL in graph.vertex_labels(vid)
            and not any(PREMISE_LABEL in graph.edge_labels(e) for e in graph.in_edges(vid))
        ]
        if len(roots) != 1:
            raise ProofImportError(
                f"expected exactly one root deduction vertex, found {len(roots)}"
            )
        st.root = roots[0]
        violations = st.structural_violations()
        if violations:
            raise ProofImportError(violations[0])
        declared = parse(table, root_goal)
        if declared != st.formula_of(st.root):
            raise ProofImportError("rootGoal header does not match the root deduction")
        return st


def new_proof(table: OperatorTable, goal: Formula | str, system: str = "") -> ProofState:
    if isinstance(goal, str):
        goal = parse(table, goal)
    return ProofState(table, goal, system)
