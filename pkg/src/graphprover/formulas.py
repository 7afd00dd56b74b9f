"""Formulas: parsing, rendering, and hash-consed interning into a graph.

A formula is either an atom or a compound built from an operator declared in
an operator table. The textual form is an S-expression, ``(and A B)``.
Operators may be declared as pure syntactic sugar via an expansion template;
``not`` in the shipped systems expands to an implication into the absurdity
atom, so expanded formulas never contain the sugar operator.

Interned formulas live in a property graph: one vertex per distinct
subformula (structural equality implies vertex identity within one store),
with "builds" edges from each operand vertex to the compound it builds,
carrying a 1-based "operand" index property. Atoms are exactly the formula
vertices with no incoming builds edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    ArityError,
    DuplicateNameError,
    FormulaSyntaxError,
    ProofImportError,
    UnknownOperatorError,
)
from .graph import PropertyGraph


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Compound:
    op: str
    operands: tuple["Formula", ...]


Formula = Atom | Compound

_ATOM_RE = re.compile(r"[A-Za-z0-9]+$")
_PLACEHOLDER_RE = re.compile(r"_([1-9][0-9]*)$")


@dataclass(frozen=True)
class Operator:
    """An operator declaration. ``expands`` is an optional sugar template

    whose placeholders _1.._arity stand for the parsed operands."""

    symbol: str
    arity: int
    infix: bool = False
    expands: str | None = None


class OperatorTable:
    def __init__(self, operators: Iterable[Operator], constants: Iterable[str] = ()):
        self.operators: dict[str, Operator] = {}
        for op in operators:
            if op.arity < 1:
                raise DuplicateNameError(f"operator {op.symbol!r} must have arity >= 1")
            if op.symbol in self.operators:
                raise DuplicateNameError(f"operator {op.symbol!r} declared twice")
            self.operators[op.symbol] = op
        self.constants: tuple[str, ...] = tuple(constants)
        for c in self.constants:
            if not _ATOM_RE.match(c):
                raise FormulaSyntaxError(f"constant {c!r} is not a valid atom", 0)
        self._expansions: dict[str, Formula] = {}
        for op in self.operators.values():
            if op.expands is not None:
                template = _parse(self, op.expands, allow_placeholders=True, allow_expansion=False)
                _check_placeholders(template, op)
                self._expansions[op.symbol] = template

    def operator(self, symbol: str) -> Operator | None:
        return self.operators.get(symbol)

    def expansion(self, symbol: str) -> Formula | None:
        return self._expansions.get(symbol)


def principal(f: Formula) -> str:
    """The principal operator symbol; for atoms, the atom name itself."""
    return f.op if isinstance(f, Compound) else f.name


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of f, including f (reflexive, transitive)."""
    acc: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in acc:
            continue
        acc.add(g)
        if isinstance(g, Compound):
            stack.extend(g.operands)
    return frozenset(acc)


def formula_size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    return 1 + sum(formula_size(x) for x in f.operands)


# -- parsing ------------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _check_placeholders(template: Formula, op: Operator) -> None:
    for sub in subformulas(template):
        if isinstance(sub, Atom):
            m = _PLACEHOLDER_RE.match(sub.name)
            if m and int(m.group(1)) > op.arity:
                raise ArityError(op.symbol, op.arity, int(m.group(1)))


def _substitute_placeholders(template: Formula, operands: tuple[Formula, ...]) -> Formula:
    if isinstance(template, Atom):
        m = _PLACEHOLDER_RE.match(template.name)
        if m:
            return operands[int(m.group(1)) - 1]
        return template
    return Compound(template.op, tuple(_substitute_placeholders(t, operands) for t in template.operands))


def _parse(table: OperatorTable, text: str, allow_placeholders: bool, allow_expansion: bool) -> Formula:
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula", 0)
    pos = 0

    def parse_expr() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input", len(text))
        tok, off = tokens[pos]
        if tok == ")":
            raise FormulaSyntaxError("unexpected ')'", off)
        if tok == "(":
            pos += 1
            if pos >= len(tokens):
                raise FormulaSyntaxError("unexpected end of input", len(text))
            head, head_off = tokens[pos]
            if head in "()":
                raise FormulaSyntaxError("expected operator", head_off)
            op = table.operator(head)
            if op is None:
                raise UnknownOperatorError(f"unknown operator {head!r}")
            pos += 1
            operands: list[Formula] = []
            while True:
                if pos >= len(tokens):
                    raise FormulaSyntaxError("missing ')'", len(text))
                if tokens[pos][0] == ")":
                    pos += 1
                    break
                operands.append(parse_expr())
            if len(operands) != op.arity:
                raise ArityError(op.symbol, op.arity, len(operands))
            if op.expands is not None:
                if not allow_expansion:
                    raise FormulaSyntaxError(
                        f"expanding operator {op.symbol!r} not allowed inside a template", head_off
                    )
                return _substitute_placeholders(table.expansion(op.symbol), tuple(operands))
            return Compound(op.symbol, tuple(operands))
        # atom token
        pos += 1
        if table.operator(tok) is not None:
            raise FormulaSyntaxError(f"operator {tok!r} used as an atom", off)
        if allow_placeholders and _PLACEHOLDER_RE.match(tok):
            return Atom(tok)
        if not _ATOM_RE.match(tok):
            raise FormulaSyntaxError(f"bad atom {tok!r}", off)
        return Atom(tok)

    result = parse_expr()
    if pos != len(tokens):
        raise FormulaSyntaxError("trailing input after formula", tokens[pos][1])
    return result


def parse(table: OperatorTable, text: str) -> Formula:
    """Parse an S-expression against the table, applying sugar expansions."""
    return _parse(table, text, allow_placeholders=False, allow_expansion=True)


def sexpr(f: Formula) -> str:
    """Render a formula as a plain S-expression. Needs no operator table."""
    if isinstance(f, Atom):
        return f.name
    return "(" + " ".join([f.op] + [sexpr(x) for x in f.operands]) + ")"


def render(table: OperatorTable, f: Formula, style: str = "sexpr") -> str:
    """Render a formula; styles are "sexpr" and "infix".

    Infix rendering is fully parenthesized and falls back to prefix form for
    operators not declared infix.
    """
    if style == "sexpr":
        return sexpr(f)
    if isinstance(f, Atom):
        return f.name
    op = table.operator(f.op)
    parts = [render(table, x, style) for x in f.operands]
    if op is not None and op.infix and op.arity == 2:
        return f"({parts[0]} {f.op} {parts[1]})"
    return "(" + " ".join([f.op] + parts) + ")"


# -- interning ----------------------------------------------------------------

FORMULA_LABEL = "Formula"
BUILDS_LABEL = "builds"
OPERAND_KEY = "operand"


class FormulaStore:
    """Hash-consing facade over a property graph.

    ``intern`` is idempotent: structurally equal formulas map to the same
    vertex within one store. Rollback is two-phase: the caller reverts the
    graph with its own journal mark, then calls ``rollback`` here with the
    matching store mark so the intern table forgets the removed vertices.
    """

    def __init__(self, graph: PropertyGraph):
        self.graph = graph
        self._vid_by_formula: dict[Formula, int] = {}
        self._formula_by_vid: dict[int, Formula] = {}
        self._added: list[Formula] = []

    def intern(self, f: Formula) -> int:
        vid = self._vid_by_formula.get(f)
        if vid is not None:
            return vid
        if isinstance(f, Atom):
            vid = self.graph.add_vertex({FORMULA_LABEL}, {"atom": f.name})
        else:
            operand_vids = [self.intern(x) for x in f.operands]
            vid = self.graph.add_vertex({FORMULA_LABEL}, {"op": f.op})
            for i, ovid in enumerate(operand_vids, start=1):
                self.graph.add_edge(ovid, vid, {BUILDS_LABEL}, {OPERAND_KEY: i})
        self._vid_by_formula[f] = vid
        self._formula_by_vid[vid] = f
        self._added.append(f)
        return vid

    def contains(self, f: Formula) -> bool:
        return f in self._vid_by_formula

    def vid_of(self, f: Formula) -> int:
        return self._vid_by_formula[f]

    def formula_at(self, vid: int) -> Formula:
        return self._formula_by_vid[vid]

    def universe(self) -> frozenset[Formula]:
        """Every formula interned so far."""
        return frozenset(self._vid_by_formula)

    def mark(self) -> int:
        return len(self._added)

    def rollback(self, mark: int) -> None:
        while len(self._added) > mark:
            f = self._added.pop()
            vid = self._vid_by_formula.pop(f)
            self._formula_by_vid.pop(vid)

    @classmethod
    def rebuild(cls, graph: PropertyGraph) -> "FormulaStore":
        """Reconstitute the intern table of an imported graph.

        Rejects graphs where two vertices denote the same formula, since that
        breaks the sharing invariant every other layer relies on.
        """
        store = cls(graph)
        memo: dict[int, Formula] = {}
        for vid in graph.vertices():
            if FORMULA_LABEL not in graph.vertex_labels(vid):
                continue
            f = formula_at_vertex(graph, vid, memo)
            if f in store._vid_by_formula:
                raise ProofImportError(
                    f"vertices {store._vid_by_formula[f]} and {vid} denote the same formula"
                )
            store._vid_by_formula[f] = vid
            store._formula_by_vid[vid] = f
            store._added.append(f)
        return store


def formula_at_vertex(graph: PropertyGraph, vid: int, _memo: dict[int, Formula] | None = None) -> Formula:
    """Reconstruct the formula a vertex denotes from graph structure alone."""
    memo = _memo if _memo is not None else {}
    if vid in memo:
        return memo[vid]
    props = graph.vertex_props(vid)
    builds = [e for e in graph.in_edges(vid) if BUILDS_LABEL in graph.edge_labels(e)]
    if not builds:
        name = props.get("atom")
        if not isinstance(name, str):
            raise ProofImportError(f"formula vertex {vid} has no atom name and no operands")
        memo[vid] = Atom(name)
        return memo[vid]
    op = props.get("op")
    if not isinstance(op, str):
        raise ProofImportError(f"compound formula vertex {vid} missing op property")
    indexed: dict[int, int] = {}
    for e in builds:
        idx = graph.edge_props(e).get(OPERAND_KEY)
        if not isinstance(idx, int) or idx in indexed:
            raise ProofImportError(f"vertex {vid} has malformed operand indices")
        indexed[idx] = graph.edge_ends(e)[0]
    if sorted(indexed) != list(range(1, len(indexed) + 1)):
        raise ProofImportError(f"vertex {vid} operand indices not contiguous from 1")
    operands = tuple(formula_at_vertex(graph, indexed[i], memo) for i in sorted(indexed))
    memo[vid] = Compound(op, operands)
    return memo[vid]
