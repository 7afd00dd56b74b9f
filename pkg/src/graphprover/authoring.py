"""Text format for defining deductive systems.

A system file is a sequence of declarations:

    -- anything after two hyphens is a comment
    system nd-minimal
    style backward

    operator -> 2 infix
    constant false

    rule impI := Rule(
        args = ["implication" =: Identity(operator = ->)],
        branches = [NewBranch(goal = SubOf(operand = 2),
                              newHypotheses = [SubOf(operand = 1)])])

    strategy auto full := Many(AndThen(
        Many(Atomic(close)),
        Try(Atomic(impI, avoidCycles = true))))

    example (-> A (-> B A))

Constructor expressions mirror the engine datatypes one for one; formulas
appear in prefix notation and are parsed against the operators the file
declares plus anything inherited through ``extends``.  Rule bindings use
``name =: spec`` with an optional trailing ``where`` filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EngineError, SystemFormatError
from .formulas import Formula, Operator, OperatorTable, parse, sexpr
from .refspec import And, Arg, Both, Identity, SubOf, SuperOf, That
from .rules import (
    BUILTIN_ENUMERATORS,
    STYLES,
    Builtin,
    CloseSpec,
    Hypotheses,
    LinePremise,
    Make,
    NewBranch,
    Rule,
    RuleArg,
    SubproofPremise,
    validate_rule,
)
from . import tactics

_PUNCT = "()[],="


# -- tokens ---------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str  # "punct" | "sym" | "str" | "int"
    value: object
    line: int


def _tokenize(text: str) -> list[_Tok]:
    out: list[_Tok] = []
    i, n, line = 0, len(text), 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("=:", i) or text.startswith(":=", i):
            out.append(_Tok("punct", text[i : i + 2], line))
            i += 2
            continue
        if c in _PUNCT:
            out.append(_Tok("punct", c, line))
            i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise SystemFormatError("unterminated string", line=line)
            out.append(_Tok("str", text[i + 1 : j], line))
            i = j + 1
            continue
        if c == ":":
            raise SystemFormatError("unexpected ':'", line=line)
        j = i
        while j < n and text[j] not in ' \t\r\n:"' + _PUNCT and not text.startswith("--", j):
            j += 1
        word = text[i:j]
        if word.isdigit():
            out.append(_Tok("int", int(word), line))
        else:
            out.append(_Tok("sym", word, line))
        i = j
    return out


# -- expression syntax tree -------------------------------------------------------


@dataclass(frozen=True)
class Sym:
    name: str
    line: int


@dataclass(frozen=True)
class Call:
    head: str
    line: int
    positional: tuple = ()
    keyword: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Binding:
    name: str
    value: object
    where: object
    line: int


@dataclass(frozen=True)
class FormulaText:
    text: str
    line: int


class _Parser:
    def __init__(self, tokens: list[_Tok]):
        self.toks = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Tok | None:
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1].line if self.toks else 1
            raise SystemFormatError("unexpected end of file", line=last)
        self.pos += 1
        return t

    def expect_punct(self, value: str) -> _Tok:
        t = self.next()
        if t.kind != "punct" or t.value != value:
            raise SystemFormatError(f"expected {value!r}, found {t.value!r}", line=t.line)
        return t

    def expect_sym(self, what: str = "a name") -> _Tok:
        t = self.next()
        if t.kind != "sym":
            raise SystemFormatError(f"expected {what}, found {t.value!r}", line=t.line)
        return t

    def at_punct(self, value: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind == "punct" and t.value == value

    def peek_required(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1].line if self.toks else 1
            raise SystemFormatError("unexpected end of file", line=last)
        return t

    # formulas are re-serialized from tokens so comments inside them vanish
    def formula(self) -> FormulaText:
        t = self.next()
        if t.kind == "sym":
            return FormulaText(t.value, t.line)
        if not (t.kind == "punct" and t.value == "("):
            raise SystemFormatError(f"expected a formula, found {t.value!r}", line=t.line)
        parts, depth = ["("], 1
        while depth > 0:
            u = self.next()
            if u.kind == "punct" and u.value == "(":
                depth += 1
            elif u.kind == "punct" and u.value == ")":
                depth -= 1
            elif u.kind != "sym" and u.kind != "int":
                raise SystemFormatError(
                    f"{u.value!r} cannot appear inside a formula", line=u.line
                )
            parts.append(str(u.value))
        return FormulaText(" ".join(parts), t.line)

    def value(self) -> object:
        t = self.peek()
        if t is None:
            raise SystemFormatError("unexpected end of file", line=self.toks[-1].line)
        if t.kind == "punct" and t.value == "(":
            return self.formula()
        if t.kind == "punct" and t.value == "[":
            return self.list_value()
        if t.kind == "str":
            self.next()
            if self.at_punct("=:"):
                self.next()
                val = self.value()
                where = None
                nxt = self.peek()
                if nxt is not None and nxt.kind == "sym" and nxt.value == "where":
                    self.next()
                    where = self.value()
                return Binding(t.value, val, where, t.line)
            return t.value
        if t.kind == "int":
            self.next()
            return t.value
        if t.kind == "sym":
            self.next()
            if self.at_punct("("):
                return self.call(t)
            return Sym(t.value, t.line)
        raise SystemFormatError(f"unexpected {t.value!r}", line=t.line)

    def list_value(self) -> list:
        self.expect_punct("[")
        items: list = []
        while not self.at_punct("]"):
            items.append(self.value())
            if self.at_punct(","):
                self.next()
            elif not self.at_punct("]"):
                t = self.peek_required()
                raise SystemFormatError(f"expected ',' or ']', found {t.value!r}", line=t.line)
        self.next()
        return items

    def call(self, head: _Tok) -> Call:
        self.expect_punct("(")
        positional: list = []
        keyword: dict = {}
        while not self.at_punct(")"):
            t = self.peek_required()
            if t.kind == "sym" and self.at_punct("=", 1):
                self.next()
                self.next()
                if t.value in keyword:
                    raise SystemFormatError(
                        f"{head.value}: duplicate keyword {t.value!r}", line=t.line
                    )
                keyword[t.value] = self.value()
            else:
                positional.append(self.value())
            if self.at_punct(","):
                self.next()
            elif not self.at_punct(")"):
                u = self.peek_required()
                raise SystemFormatError(f"expected ',' or ')', found {u.value!r}", line=u.line)
        self.next()
        return Call(head.value, head.line, tuple(positional), keyword)


# -- declarations ----------------------------------------------------------------


@dataclass
class SystemDecl:
    """A parsed system file, before any engine objects are built."""

    name: str = ""
    extends: str | None = None
    style: str | None = None
    operators: list[Operator] = field(default_factory=list)
    constants: list[str] = field(default_factory=list)
    rules: list[tuple[str, object, int]] = field(default_factory=list)
    strategies: list[tuple[str, bool, object, int]] = field(default_factory=list)
    examples: list[FormulaText] = field(default_factory=list)


_DECL_WORDS = {"system", "style", "operator", "constant", "rule", "strategy", "example"}


def parse_declarations(text: str) -> SystemDecl:
    p = _Parser(_tokenize(text))
    decl = SystemDecl()
    seen_system = False
    while p.peek() is not None:
        head = p.expect_sym("a declaration")
        if head.value == "system":
            if seen_system:
                raise SystemFormatError("only one system per file", line=head.line)
            seen_system = True
            decl.name = p.expect_sym("a system name").value
            nxt = p.peek()
            if nxt is not None and nxt.kind == "sym" and nxt.value == "extends":
                p.next()
                decl.extends = p.expect_sym("a parent system name").value
        elif head.value == "style":
            s = p.expect_sym("a proof style").value
            if s not in STYLES:
                raise SystemFormatError(
                    f"style must be one of {', '.join(STYLES)}", line=head.line
                )
            decl.style = s
        elif head.value == "operator":
            symbol = p.expect_sym("an operator symbol").value
            arity_tok = p.next()
            if arity_tok.kind != "int":
                raise SystemFormatError("operator arity must be a number", line=arity_tok.line)
            infix = False
            expands = None
            while True:
                nxt = p.peek()
                if nxt is None or nxt.kind != "sym":
                    break
                if nxt.value == "infix":
                    p.next()
                    infix = True
                elif nxt.value == "expands":
                    p.next()
                    expands = p.formula().text
                else:
                    break
            decl.operators.append(Operator(symbol, arity_tok.value, infix, expands))
        elif head.value == "constant":
            decl.constants.append(p.expect_sym("a constant name").value)
        elif head.value == "rule":
            name = p.expect_sym("a rule name").value
            p.expect_punct(":=")
            decl.rules.append((name, p.value(), head.line))
        elif head.value == "strategy":
            name = p.expect_sym("a strategy name").value
            full = False
            nxt = p.peek()
            if nxt is not None and nxt.kind == "sym" and nxt.value == "full":
                p.next()
                full = True
            p.expect_punct(":=")
            decl.strategies.append((name, full, p.value(), head.line))
        elif head.value == "example":
            decl.examples.append(p.formula())
        else:
            raise SystemFormatError(
                f"unknown declaration {head.value!r} (expected one of "
                f"{', '.join(sorted(_DECL_WORDS))})",
                line=head.line,
            )
    if not seen_system:
        raise SystemFormatError("missing system declaration", line=1)
    return decl


# -- constructor builders ----------------------------------------------------------


@dataclass
class _Ctx:
    table: OperatorTable
    style: str


def _fail(node, msg: str):
    line = getattr(node, "line", None)
    raise SystemFormatError(msg, line=line)


def _formula(node, ctx: _Ctx) -> Formula:
    if isinstance(node, Sym):
        node = FormulaText(node.name, node.line)
    if not isinstance(node, FormulaText):
        _fail(node, "expected a formula here")
    try:
        return parse(ctx.table, node.text)
    except EngineError as exc:
        raise SystemFormatError(f"bad formula: {exc}", line=node.line) from exc


def _name(node) -> str:
    if isinstance(node, str):
        return node
    if isinstance(node, Sym):
        return node.name
    _fail(node, "expected a name")


def _bool(node) -> bool:
    if isinstance(node, Sym) and node.name in ("true", "false"):
        return node.name == "true"
    _fail(node, "expected true or false")


def _int(node) -> int:
    if isinstance(node, int):
        return node
    _fail(node, "expected a number")


def _check_keywords(call: Call, allowed: tuple[str, ...]) -> None:
    for k in call.keyword:
        if k not in allowed:
            _fail(call, f"{call.head} does not take {k!r}")


def _positional(call: Call, count: int) -> tuple:
    if len(call.positional) != count:
        _fail(call, f"{call.head} takes {count} argument(s), got {len(call.positional)}")
    return call.positional


def _build_selector(call: Call, ctx: _Ctx, cls):
    _check_keywords(call, ("operator", "operand"))
    _positional(call, 0)
    op = call.keyword.get("operator")
    operand = call.keyword.get("operand")
    return cls(
        operator=None if op is None else _name(op),
        operand=None if operand is None else _int(operand),
    )


def _build_spec(node, ctx: _Ctx):
    """A reference spec, an enumerator, or a Make template."""
    if not isinstance(node, Call):
        _fail(node, "expected a spec constructor")
    head = node.head
    if head in ("Identity", "SuperOf", "SubOf"):
        cls = {"Identity": Identity, "SuperOf": SuperOf, "SubOf": SubOf}[head]
        return _build_selector(node, ctx, cls)
    if head in ("Both", "And"):
        _check_keywords(node, ())
        a, b = _positional(node, 2)
        cls = Both if head == "Both" else And
        return cls(_build_spec(a, ctx), _build_spec(b, ctx))
    if head == "That":
        _check_keywords(node, ())
        (inner,) = _positional(node, 1)
        return That(_build_spec(inner, ctx))
    if head == "Arg":
        _check_keywords(node, ())
        (name,) = _positional(node, 1)
        return Arg(_name(name))
    if head == "Hypotheses":
        _check_keywords(node, ("operator", "subformulas"))
        _positional(node, 0)
        op = node.keyword.get("operator")
        sub = node.keyword.get("subformulas")
        return Hypotheses(
            operator=None if op is None else _name(op),
            subformulas=False if sub is None else _bool(sub),
        )
    if head == "Builtin":
        _check_keywords(node, ())
        (name,) = _positional(node, 1)
        name = _name(name)
        if name not in BUILTIN_ENUMERATORS:
            _fail(node, f"no builtin enumerator named {name!r}")
        return Builtin(name)
    if head == "Make":
        _check_keywords(node, ())
        (template,) = _positional(node, 1)
        return Make(_formula(template, ctx))
    _fail(node, f"unknown spec constructor {head!r}")


def _build_conclusion(node, ctx: _Ctx):
    if isinstance(node, list):
        return tuple(_build_spec(x, ctx) for x in node)
    return _build_spec(node, ctx)


def _build_branch(node, ctx: _Ctx) -> NewBranch:
    if not isinstance(node, Call) or node.head != "NewBranch":
        _fail(node, "branches must be NewBranch(...) entries")
    _check_keywords(node, ("goal", "newHypotheses", "role"))
    _positional(node, 0)
    if "goal" not in node.keyword:
        _fail(node, "NewBranch needs a goal")
    goal = _build_spec(node.keyword["goal"], ctx)
    hyps = node.keyword.get("newHypotheses", [])
    if not isinstance(hyps, list):
        _fail(node, "newHypotheses must be a list")
    role = node.keyword.get("role")
    return NewBranch(
        goal,
        tuple(_build_spec(h, ctx) for h in hyps),
        None if role is None else _name(role),
    )


def _build_rule_arg(node, ctx: _Ctx) -> RuleArg:
    if not isinstance(node, Binding):
        _fail(node, 'rule args must be "name" =: spec entries')
    spec = _build_spec(node.value, ctx)
    where = None if node.where is None else _build_spec(node.where, ctx)
    return RuleArg(node.name, spec, where)


def _build_premise(node, ctx: _Ctx):
    if not isinstance(node, Binding) or not isinstance(node.value, Call):
        _fail(node, 'premises must be "role" =: Line(...) or "role" =: Subproof(...)')
    call = node.value
    if node.where is not None:
        _fail(node, "premises take no where clause; constrain the spec instead")
    if call.head == "Line":
        _check_keywords(call, ())
        (spec,) = _positional(call, 1)
        return LinePremise(node.name, _build_spec(spec, ctx))
    if call.head == "Subproof":
        _check_keywords(call, ("hypothesis", "last"))
        _positional(call, 0)
        if "hypothesis" not in call.keyword or "last" not in call.keyword:
            _fail(call, "Subproof premises need hypothesis and last")
        return SubproofPremise(
            node.name,
            _build_spec(call.keyword["hypothesis"], ctx),
            _build_spec(call.keyword["last"], ctx),
        )
    _fail(call, f"premises cannot be built from {call.head!r}")


def _build_closes(node, ctx: _Ctx) -> CloseSpec:
    if not isinstance(node, Call) or node.head != "Subproof":
        _fail(node, "closes must be a Subproof(...) pattern")
    _check_keywords(node, ("hypothesis", "last"))
    _positional(node, 0)
    if "last" not in node.keyword:
        _fail(node, "a close pattern needs last")
    hyp = node.keyword.get("hypothesis")
    return CloseSpec(
        _build_spec(node.keyword["last"], ctx),
        None if hyp is None else _build_spec(hyp, ctx),
    )


_RULE_KEYWORDS = (
    "args",
    "branches",
    "closesAs",
    "kind",
    "premises",
    "conclusion",
    "closes",
    "opensStrict",
    "closesStrict",
    "crossesStrict",
)


def _build_rule(name: str, node, ctx: _Ctx) -> Rule:
    if not isinstance(node, Call):
        _fail(node, "a rule body must be a constructor call")
    head = node.head
    if head == "Premise":
        _check_keywords(node, ())
        _positional(node, 0)
        return Rule(name, style=ctx.style, kind="premise")
    if head == "Assume":
        _check_keywords(node, ("strict",))
        _positional(node, 0)
        strict = node.keyword.get("strict")
        return Rule(
            name,
            style=ctx.style,
            kind="assume",
            opens_strict=False if strict is None else _bool(strict),
        )
    if head == "Axiom":
        _check_keywords(node, ())
        (schema,) = _positional(node, 1)
        return Rule(name, style=ctx.style, kind="axiom", schema=_formula(schema, ctx))
    if head == "ModusPonens":
        _check_keywords(node, ())
        _positional(node, 0)
        return Rule(name, style=ctx.style, kind="mp")
    if head == "Necessitation":
        _check_keywords(node, ())
        _positional(node, 0)
        template = FormulaText("(box premise)", node.line)
        return Rule(name, style=ctx.style, kind="nec", conclusion=Make(_formula(template, ctx)))
    if head != "Rule":
        _fail(node, f"unknown rule constructor {head!r}")
    _check_keywords(node, _RULE_KEYWORDS)
    _positional(node, 0)
    kw = node.keyword
    args = kw.get("args", [])
    branches = kw.get("branches", [])
    premises = kw.get("premises", [])
    for slot, val in (("args", args), ("branches", branches), ("premises", premises)):
        if not isinstance(val, list):
            _fail(node, f"{slot} must be a list")
    closes_as = kw.get("closesAs")
    kind = kw.get("kind")
    conclusion = kw.get("conclusion")
    closes = kw.get("closes")
    return Rule(
        name,
        style=ctx.style,
        args=tuple(_build_rule_arg(a, ctx) for a in args),
        branches=tuple(_build_branch(b, ctx) for b in branches),
        closes_as=None if closes_as is None else _name(closes_as),
        kind="" if kind is None else _name(kind),
        premises=tuple(_build_premise(p, ctx) for p in premises),
        conclusion=None if conclusion is None else _build_conclusion(conclusion, ctx),
        closes=None if closes is None else _build_closes(closes, ctx),
        opens_strict=_bool(kw["opensStrict"]) if "opensStrict" in kw else False,
        closes_strict=_bool(kw["closesStrict"]) if "closesStrict" in kw else False,
        crosses_strict=_bool(kw["crossesStrict"]) if "crossesStrict" in kw else False,
    )


def _build_tactic(node, ctx: _Ctx):
    if not isinstance(node, Call):
        _fail(node, "expected a tactic constructor")
    head = node.head
    if head == "Atomic":
        _check_keywords(node, ("enumerator", "avoidCycles"))
        (rule,) = _positional(node, 1)
        enum = node.keyword.get("enumerator")
        avoid = node.keyword.get("avoidCycles")
        enum_built = None if enum is None else _build_spec(enum, ctx)
        if enum_built is not None and not isinstance(enum_built, (Hypotheses, Builtin)):
            _fail(node, "enumerator must be Hypotheses(...) or Builtin(...)")
        return tactics.Atomic(
            _name(rule),
            enumerator=enum_built,
            avoid_cycles=False if avoid is None else _bool(avoid),
        )
    if head in ("Many", "Try", "Some"):
        _check_keywords(node, ())
        (body,) = _positional(node, 1)
        cls = {"Many": tactics.Many, "Try": tactics.Try, "Some": tactics.Some}[head]
        return cls(_build_tactic(body, ctx))
    if head == "AndThen":
        _check_keywords(node, ())
        if len(node.positional) < 2:
            _fail(node, "AndThen takes at least two tactics")
        built = [_build_tactic(t, ctx) for t in node.positional]
        out = built[-1]
        for t in reversed(built[:-1]):
            out = tactics.AndThen(t, out)
        return out
    if head == "OrElse":
        _check_keywords(node, ())
        a, b = _positional(node, 2)
        return tactics.OrElse(_build_tactic(a, ctx), _build_tactic(b, ctx))
    _fail(node, f"unknown tactic constructor {head!r}")


def parse_tactic(text: str, table: OperatorTable, style: str, known_rules=None):
    """Parse tactic surface syntax, e.g. Many(AndThen(Atomic(close), Try(Atomic(impI)))).

    known_rules, when given, is the pool of rule names Atomic may mention."""
    p = _Parser(_tokenize(text))
    node = p.value()
    trailing = p.peek()
    if trailing is not None:
        raise SystemFormatError(
            f"unexpected {trailing.value!r} after the tactic", line=trailing.line
        )
    tactic = _build_tactic(node, _Ctx(table, style))
    if known_rules is not None:
        missing = _atomic_rule_names(tactic) - set(known_rules)
        if missing:
            raise SystemFormatError(
                f"tactic mentions unknown rule(s) {', '.join(sorted(missing))}"
            )
    return tactic


def _atomic_rule_names(tactic) -> set[str]:
    if isinstance(tactic, tactics.Atomic):
        return {tactic.rule} if isinstance(tactic.rule, str) else set()
    if isinstance(tactic, (tactics.Many, tactics.Try, tactics.Some)):
        return _atomic_rule_names(tactic.tactic)
    if isinstance(tactic, tactics.AndThen):
        return _atomic_rule_names(tactic.first) | _atomic_rule_names(tactic.second)
    if isinstance(tactic, tactics.OrElse):
        return _atomic_rule_names(tactic.first) | _atomic_rule_names(tactic.second)
    return set()


# -- assembly -----------------------------------------------------------------


@dataclass(frozen=True)
class AssembledSystem:
    name: str
    style: str
    extends: str | None
    table: OperatorTable
    rules: dict  # name -> Rule, declaration order
    strategies: dict  # name -> (tactic, full)
    examples: tuple[str, ...]


def assemble(decl: SystemDecl, parent=None) -> AssembledSystem:
    """Build engine objects from a parsed file.

    parent, when given, supplies inherited operators and the pool of rule
    names strategies may mention; it must expose table, style, name and
    rule_names().
    """
    if decl.extends and parent is None:
        raise SystemFormatError(f"{decl.name} extends {decl.extends}, which is not loaded")
    if parent is not None and decl.style is not None and decl.style != parent.style:
        raise SystemFormatError(
            f"{decl.name} cannot switch style from {parent.style} to {decl.style}"
        )
    style = decl.style or (parent.style if parent is not None else None)
    if style is None:
        raise SystemFormatError(f"{decl.name} declares no style")

    inherited_ops = list(parent.table.operators.values()) if parent is not None else []
    inherited_consts = list(parent.table.constants) if parent is not None else []
    try:
        table = OperatorTable(
            inherited_ops + decl.operators,
            tuple(dict.fromkeys(inherited_consts + decl.constants)),
        )
    except EngineError as exc:
        raise SystemFormatError(f"{decl.name}: {exc}") from exc

    ctx = _Ctx(table, style)
    rules: dict[str, Rule] = {}
    for name, body, line in decl.rules:
        if name in rules:
            raise SystemFormatError(f"rule {name!r} declared twice", line=line)
        rule = _build_rule(name, body, ctx)
        issues = validate_rule(rule)
        if issues:
            raise SystemFormatError(
                f"rule {name!r}: " + "; ".join(i.message for i in issues), line=line
            )
        rules[name] = rule

    known = set(rules)
    if parent is not None:
        known |= set(parent.rule_names())
    strategies: dict[str, tuple] = {}
    for name, full, body, line in decl.strategies:
        if name in strategies:
            raise SystemFormatError(f"strategy {name!r} declared twice", line=line)
        tactic = _build_tactic(body, ctx)
        missing = _atomic_rule_names(tactic) - known
        if missing:
            raise SystemFormatError(
                f"strategy {name!r} mentions unknown rule(s) {', '.join(sorted(missing))}",
                line=line,
            )
        strategies[name] = (tactic, full)

    examples = tuple(sexpr(_formula(e, ctx)) for e in decl.examples)
    return AssembledSystem(decl.name, style, decl.extends, table, rules, strategies, examples)
