"""Line-style proof states: scope discipline, rule kinds, hilbert steps."""

import random

import pytest

from graphprover.errors import (
    InvalidConclusionError,
    NecessitationUnderHypothesisError,
    NonMatchingMPError,
    NothingToUndoError,
    RuleNotApplicableError,
    ScopeError,
)
from graphprover.fitch import FitchState, new_linear_proof
from graphprover.formulas import Operator, OperatorTable, parse, sexpr
from graphprover.graph import document_bytes
from graphprover.refspec import And, Arg, Both, Identity, SubOf, That
from graphprover.rules import (
    CloseSpec,
    LinePremise,
    Make,
    Rule,
    SubproofPremise,
    applicable,
    apply_rule,
    undo,
)

from oracles import random_formula


def table():
    return OperatorTable(
        (
            Operator("->", 2, True),
            Operator("and", 2, True),
            Operator("or", 2, True),
            Operator("box", 1, False),
        ),
        constants=("false",),
    )


T = table()

PREMISE = Rule("premise", style="fitch", kind="premise")
ASSUME = Rule("assume", style="fitch", kind="assume")
ASSUME_STRICT = Rule("shift", style="fitch", kind="assume", opens_strict=True)
REIT = Rule(
    "reit",
    style="fitch",
    kind="line",
    premises=(LinePremise("source", Identity()),),
    conclusion=Arg("source"),
)
ANDI = Rule(
    "andI",
    style="fitch",
    kind="line",
    premises=(LinePremise("left", Identity()), LinePremise("right", Identity())),
    conclusion=Make(parse(T, "(and left right)")),
)
ANDE = Rule(
    "andE",
    style="fitch",
    kind="line",
    premises=(LinePremise("conjunction", Identity(operator="and")),),
    conclusion=(
        And(Arg("conjunction"), SubOf(operand=1)),
        And(Arg("conjunction"), SubOf(operand=2)),
    ),
)
IMPE = Rule(
    "impE",
    style="fitch",
    kind="line",
    premises=(
        LinePremise("implication", Identity(operator="->")),
        LinePremise(
            "antecedent", That(Both(Identity(), And(Arg("implication"), SubOf(operand=1))))
        ),
    ),
    conclusion=And(Arg("implication"), SubOf(operand=2)),
)
IMPI = Rule(
    "impI",
    style="fitch",
    kind="close",
    closes=CloseSpec(last=Identity(), hypothesis=Identity()),
    conclusion=Make(parse(T, "(-> hypothesis last)")),
)
BOXI = Rule(
    "boxI",
    style="fitch",
    kind="close",
    closes=CloseSpec(last=Identity()),
    closes_strict=True,
    conclusion=Make(parse(T, "(box last)")),
)
BOXE = Rule(
    "boxE",
    style="fitch",
    kind="line",
    premises=(LinePremise("boxed", Identity(operator="box")),),
    crosses_strict=True,
    conclusion=And(Arg("boxed"), SubOf(operand=1)),
)
ORE = Rule(
    "orE",
    style="fitch",
    kind="line",
    premises=(
        LinePremise("disjunction", Identity(operator="or")),
        SubproofPremise(
            "left",
            hypothesis=Both(Identity(), And(Arg("disjunction"), SubOf(operand=1))),
            last=Identity(),
        ),
        SubproofPremise(
            "right",
            hypothesis=Both(Identity(), And(Arg("disjunction"), SubOf(operand=2))),
            last=Both(Identity(), Arg("leftLast")),
        ),
    ),
    conclusion=Arg("leftLast"),
)


def f(text):
    return parse(T, text)


class TestPremisesAndLines:
    def test_premises_then_derivation(self):
        st = new_linear_proof(T, "(and A B)")
        apply_rule(PREMISE, st, None, {"formula": f("A")})
        apply_rule(PREMISE, st, None, {"formula": f("B")})
        apply_rule(ANDI, st, None, {"left": 1, "right": 2})
        assert sexpr(st.line(3).formula) == "(and A B)"
        assert st.line(3).cites == (1, 2)
        assert st.complete()

    def test_premise_after_derivation_rejected(self):
        st = new_linear_proof(T, "A")
        apply_rule(PREMISE, st, None, {"formula": f("A")})
        apply_rule(REIT, st, None, {"source": 1})
        with pytest.raises(RuleNotApplicableError):
            apply_rule(PREMISE, st, None, {"formula": f("B")})

    def test_impE_line(self):
        st = new_linear_proof(T, "B")
        apply_rule(PREMISE, st, None, {"formula": f("(-> A B)")})
        apply_rule(PREMISE, st, None, {"formula": f("A")})
        asgs = applicable(IMPE, st)
        assert asgs == [{"implication": 1, "antecedent": 2, "result": f("B")}]
        apply_rule(IMPE, st, None, asgs[0])
        assert st.complete()

    def test_wrong_result_rejected(self):
        st = new_linear_proof(T, "B")
        apply_rule(PREMISE, st, None, {"formula": f("(-> A B)")})
        apply_rule(PREMISE, st, None, {"formula": f("A")})
        with pytest.raises(InvalidConclusionError):
            apply_rule(IMPE, st, None, {"implication": 1, "antecedent": 2, "result": f("A")})
        assert len(st.lines) == 2

    def test_andE_offers_both_projections(self):
        st = new_linear_proof(T, "A")
        apply_rule(PREMISE, st, None, {"formula": f("(and A B)")})
        asgs = applicable(ANDE, st)
        assert asgs == [
            {"conjunction": 1, "result": f("A")},
            {"conjunction": 1, "result": f("B")},
        ]


class TestSubproofs:
    def test_impI_example(self):
        st = new_linear_proof(T, "(-> A B)")
        apply_rule(PREMISE, st, None, {"formula": f("B")})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        assert st.depth == 1
        apply_rule(REIT, st, None, {"source": 1})
        apply_rule(IMPI, st, None, {})
        assert st.depth == 0
        last = st.lines[-1]
        assert sexpr(last.formula) == "(-> A B)"
        assert last.depth == 0
        assert last.ranges == ((2, 3),)
        assert st.complete()

    def test_closed_lines_leave_scope(self):
        st = new_linear_proof(T, "(-> A A)")
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        with pytest.raises(ScopeError):
            apply_rule(REIT, st, None, {"source": 1})

    def test_close_with_no_open_subproof(self):
        st = new_linear_proof(T, "A")
        with pytest.raises(RuleNotApplicableError):
            apply_rule(IMPI, st, None, {})

    def test_orE_cites_closed_subproofs(self):
        st = new_linear_proof(T, "A")
        apply_rule(PREMISE, st, None, {"formula": f("(or A A)")})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        assert st.citable_subproofs() == [(2, 2), (4, 4)]
        asgs = applicable(ORE, st)
        assert {"disjunction": 1, "left": (2, 2), "right": (4, 4), "result": f("A")} in asgs
        apply_rule(ORE, st, None, {"disjunction": 1, "left": (2, 2), "right": (4, 4)})
        assert st.complete()
        assert st.lines[-1].ranges == ((2, 2), (4, 4))

    def test_orE_hypothesis_mismatch_rejected(self):
        st = new_linear_proof(T, "A")
        apply_rule(PREMISE, st, None, {"formula": f("(or A B)")})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        # the right branch must start from the second disjunct, B
        with pytest.raises(RuleNotApplicableError):
            apply_rule(ORE, st, None, {"disjunction": 1, "left": (2, 2), "right": (4, 4)})


class TestStrictScope:
    def test_plain_citation_across_strict_boundary(self):
        st = new_linear_proof(T, "(box A)")
        apply_rule(PREMISE, st, None, {"formula": f("A")})
        apply_rule(ASSUME_STRICT, st, None, {})
        with pytest.raises(ScopeError):
            apply_rule(REIT, st, None, {"source": 1})

    def test_crossing_rule_reaches_one_boundary(self):
        st = new_linear_proof(T, "(box A)")
        apply_rule(PREMISE, st, None, {"formula": f("(box A)")})
        apply_rule(ASSUME_STRICT, st, None, {})
        apply_rule(BOXE, st, None, {"boxed": 1})
        assert sexpr(st.lines[-1].formula) == "A"
        assert st.lines[-1].depth == 1

    def test_crossing_rule_stops_at_two_boundaries(self):
        st = new_linear_proof(T, "(box (box A))")
        apply_rule(PREMISE, st, None, {"formula": f("(box A)")})
        apply_rule(ASSUME_STRICT, st, None, {})
        apply_rule(ASSUME_STRICT, st, None, {})
        with pytest.raises(ScopeError):
            apply_rule(BOXE, st, None, {"boxed": 1})

    def test_boxI_closes_strict_subproof(self):
        st = new_linear_proof(T, "(box A)")
        apply_rule(PREMISE, st, None, {"formula": f("(box A)")})
        apply_rule(ASSUME_STRICT, st, None, {})
        apply_rule(BOXE, st, None, {"boxed": 1})
        apply_rule(BOXI, st, None, {})
        assert st.depth == 0
        assert sexpr(st.lines[-1].formula) == "(box A)"
        assert st.complete()

    def test_impI_cannot_close_strict_subproof(self):
        st = new_linear_proof(T, "(box A)")
        apply_rule(PREMISE, st, None, {"formula": f("(box A)")})
        apply_rule(ASSUME_STRICT, st, None, {})
        apply_rule(BOXE, st, None, {"boxed": 1})
        with pytest.raises(RuleNotApplicableError):
            apply_rule(IMPI, st, None, {})

    def test_line_in_closed_strict_subproof_not_citable(self):
        """Necessitation-style: reaching into a finished strict subproof fails."""
        st = new_linear_proof(T, "(box A)")
        apply_rule(PREMISE, st, None, {"formula": f("(box A)")})
        apply_rule(ASSUME_STRICT, st, None, {})
        apply_rule(BOXE, st, None, {"boxed": 1})
        apply_rule(BOXI, st, None, {})
        with pytest.raises(ScopeError):
            apply_rule(REIT, st, None, {"source": 2})


class ScopeModel:
    """Independent scope bookkeeping: a line is citable while every subproof
    it sits inside is still open, and strict boundaries opened after it block
    plain citations."""

    def __init__(self):
        self.next_frame = 0
        self.open = []  # (frame id, strict)
        self.lines = []  # tuple of (frame id, strict) at creation

    def add_line(self):
        self.lines.append(tuple(self.open))

    def push(self, strict):
        self.open.append((self.next_frame, strict))
        self.next_frame += 1

    def pop(self):
        self.open.pop()

    def citable(self, i, crossings_allowed):
        path = self.lines[i - 1]
        if path != tuple(self.open[: len(path)]):
            return False
        beyond = self.open[len(path):]
        return sum(1 for _, strict in beyond if strict) <= crossings_allowed

    def citable_lines(self, crossings_allowed):
        return [i for i in range(1, len(self.lines) + 1) if self.citable(i, crossings_allowed)]


class TestScopeOracle:
    def test_random_scripts_agree_with_model(self):
        rng = random.Random(20250819)
        for _ in range(40):
            st = new_linear_proof(T, "Z")
            model = ScopeModel()
            apply_rule(PREMISE, st, None, {"formula": f("A")})
            model.add_line()
            for _step in range(rng.randrange(4, 25)):
                ops = ["assume", "strict"]
                if st.frames and len(st.lines) >= st.frames[-1].start:
                    ops.append("close")
                if st.citable_lines():
                    ops.append("reit")
                op = rng.choice(ops)
                if op == "assume":
                    h = random_formula(rng, "AB", (("->", 2),), 2)
                    apply_rule(ASSUME, st, None, {"hypothesis": h})
                    model.push(False)
                    model.add_line()
                elif op == "strict":
                    apply_rule(ASSUME_STRICT, st, None, {})
                    model.push(True)
                elif op == "close":
                    if st.frames[-1].strict:
                        apply_rule(BOXI, st, None, {})
                    else:
                        apply_rule(IMPI, st, None, {})
                    model.pop()
                    model.add_line()
                else:
                    i = rng.choice(st.citable_lines())
                    apply_rule(REIT, st, None, {"source": i})
                    model.add_line()
                assert st.citable_lines(False) == model.citable_lines(0)
                assert st.citable_lines(True) == model.citable_lines(1)

    def test_out_of_scope_citations_raise(self):
        rng = random.Random(99)
        for _ in range(20):
            st = new_linear_proof(T, "Z")
            for _step in range(rng.randrange(3, 12)):
                if st.frames and len(st.lines) >= st.frames[-1].start and rng.random() < 0.4:
                    apply_rule(IMPI, st, None, {})
                else:
                    apply_rule(ASSUME, st, None, {"hypothesis": random_formula(rng, "AB", (("->", 2),), 2)})
            blocked = [i for i in range(1, len(st.lines) + 1) if not st.citable(i)]
            for i in blocked:
                with pytest.raises(ScopeError):
                    apply_rule(REIT, st, None, {"source": i})


HK1 = Rule("K1", style="hilbert", kind="axiom", schema=parse(T, "(-> a (-> b a))"))
HK2 = Rule(
    "K2",
    style="hilbert",
    kind="axiom",
    schema=parse(T, "(-> (-> a (-> b c)) (-> (-> a b) (-> a c)))"),
)
HDIST = Rule(
    "Kdist",
    style="hilbert",
    kind="axiom",
    schema=parse(T, "(-> (box (-> a b)) (-> (box a) (box b)))"),
)
HMP = Rule("mp", style="hilbert", kind="mp")
HNEC = Rule("nec", style="hilbert", kind="nec", conclusion=Make(parse(T, "(box premise)")))
HPREM = Rule("premise", style="hilbert", kind="premise")


class TestHilbert:
    def test_axiom_instance(self):
        st = new_linear_proof(T, "(-> (box (-> p q)) (-> (box p) (box q)))")
        apply_rule(HDIST, st, None, {"substitution": {"a": f("p"), "b": f("q")}})
        assert st.complete()
        assert st.line(1).kind == "axiom"

    def test_mp_both_orientations(self):
        for i, j in ((1, 2), (2, 1)):
            st = new_linear_proof(T, "q")
            apply_rule(HPREM, st, None, {"formula": f("(-> p q)")})
            apply_rule(HPREM, st, None, {"formula": f("p")})
            apply_rule(HMP, st, None, {"i": i, "j": j})
            assert sexpr(st.line(3).formula) == "q"
            assert st.line(3).cites == (1, 2)

    def test_mp_rejects_non_matching(self):
        st = new_linear_proof(T, "q")
        apply_rule(HPREM, st, None, {"formula": f("(-> p q)")})
        apply_rule(HPREM, st, None, {"formula": f("q")})
        with pytest.raises(NonMatchingMPError):
            apply_rule(HMP, st, None, {"i": 1, "j": 2})

    def test_box_p_implies_p_derivation(self):
        """Derive p->p from the two propositional schemata, then box it."""
        st = new_linear_proof(T, "(box (-> p p))")
        p, ptp = f("p"), f("(-> p p)")
        apply_rule(HK1, st, None, {"substitution": {"a": p, "b": ptp}})
        apply_rule(HK2, st, None, {"substitution": {"a": p, "b": ptp, "c": p}})
        apply_rule(HMP, st, None, {"i": 2, "j": 1})
        apply_rule(HK1, st, None, {"substitution": {"a": p, "b": p}})
        apply_rule(HMP, st, None, {"i": 3, "j": 4})
        assert sexpr(st.line(5).formula) == "(-> p p)"
        apply_rule(HNEC, st, None, {"i": 5})
        assert sexpr(st.line(6).formula) == "(box (-> p p))"
        assert st.complete()
        assert len(st.lines) == 6

    def test_nec_under_premise_rejected(self):
        st = new_linear_proof(T, "(box q)")
        apply_rule(HPREM, st, None, {"formula": f("q")})
        before = document_bytes(st.to_document())
        with pytest.raises(NecessitationUnderHypothesisError):
            apply_rule(HNEC, st, None, {"i": 1})
        assert document_bytes(st.to_document()) == before

    def test_nec_transitive_dependency_rejected(self):
        st = new_linear_proof(T, "(box q)")
        apply_rule(HPREM, st, None, {"formula": f("(-> p q)")})
        apply_rule(HPREM, st, None, {"formula": f("p")})
        apply_rule(HMP, st, None, {"i": 1, "j": 2})
        with pytest.raises(NecessitationUnderHypothesisError):
            apply_rule(HNEC, st, None, {"i": 3})

    def test_axiom_applicable_matches_goal(self):
        st = new_linear_proof(T, "(-> p (-> q p))")
        asgs = applicable(HK1, st)
        assert asgs == [{"substitution": {"a": f("p"), "b": f("q")}}]

    def test_mp_applicable_enumerates_pairs(self):
        st = new_linear_proof(T, "q")
        apply_rule(HPREM, st, None, {"formula": f("(-> p q)")})
        apply_rule(HPREM, st, None, {"formula": f("p")})
        apply_rule(HPREM, st, None, {"formula": f("(-> p r)")})
        assert applicable(HMP, st) == [{"i": 1, "j": 2}, {"i": 3, "j": 2}]

    def test_nec_applicable_lists_only_clean_lines(self):
        st = new_linear_proof(T, "(box q)")
        apply_rule(HPREM, st, None, {"formula": f("p")})
        apply_rule(HK1, st, None, {"substitution": {"a": f("p"), "b": f("q")}})
        assert applicable(HNEC, st) == [{"i": 2}]


class TestUndoAndExport:
    def test_undo_restores_document(self):
        st = new_linear_proof(T, "(-> A B)")
        apply_rule(PREMISE, st, None, {"formula": f("B")})
        before = document_bytes(st.to_document())
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(REIT, st, None, {"source": 1})
        apply_rule(IMPI, st, None, {})
        undo(st)
        undo(st)
        undo(st)
        assert document_bytes(st.to_document()) == before
        assert st.depth == 0
        undo(st)
        with pytest.raises(NothingToUndoError):
            undo(st)

    def test_undo_reopens_frame(self):
        st = new_linear_proof(T, "(-> A A)")
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(IMPI, st, None, {})
        assert st.depth == 0
        undo(st)
        assert st.depth == 1
        assert st.frames[-1].hypothesis == f("A")
        assert st.closed == []

    def test_export_schema(self):
        st = new_linear_proof(T, "(-> A B)")
        apply_rule(PREMISE, st, None, {"formula": f("B")})
        apply_rule(ASSUME, st, None, {"hypothesis": f("A")})
        apply_rule(REIT, st, None, {"source": 1})
        apply_rule(IMPI, st, None, {})
        doc = st.to_document()
        assert doc["rootGoal"] == "(-> A B)"
        deds = [v for v in doc["vertices"] if "Deduction" in v["labels"]]
        assert len(deds) == 4
        by_line = {v["props"]["line"]: v for v in deds}
        assert by_line[1]["props"]["status"] == "leaf"
        assert by_line[1]["props"]["leafKind"] == "hypothesis"
        assert by_line[1]["props"]["kind"] == "premise"
        assert by_line[2]["props"]["kind"] == "hypothesis"
        assert by_line[3]["props"] == {
            "line": 3,
            "depth": 1,
            "kind": "derived",
            "status": "regular",
            "rule": "reit",
        }
        range_edges = [e for e in doc["edges"] if "to" in e.get("props", {})]
        assert len(range_edges) == 1
        assert range_edges[0]["props"]["to"] == 3
