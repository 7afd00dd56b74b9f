"""Relative formula references.

A reference denotes, for a frame formula f inside a universe of known
formulas, the set of formulas standing in some structural relation to f:

- ``Identity``: {f}.
- ``SubOf``: the subformulas of f (reflexive); with ``operand=i``, just the
  i-th immediate operand of f.
- ``SuperOf``: the formulas in the universe having f as a subformula
  (reflexive); with ``operand=i``, those whose i-th immediate operand is f.
- ``Both(r1, r2)``: intersection.
- ``And(r1, r2)``: the union of r2 evaluated with each result of r1 as the
  new frame (relation composition; the universe stays fixed).
- ``That(r)``: {f} if r denotes a nonempty set, else the empty set.
- ``Arg(n)``: the formula bound to rule argument n; ignores the frame.

The atomic combinators accept an ``operator`` constraint that keeps only
formulas whose principal operator is the given symbol; for atoms the atom
name itself is matched, which is how constant atoms like the absurdity
symbol are selected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import MisplacedOperandIndexError, UnboundArgumentError
from .formulas import Compound, Formula, principal, subformulas


@dataclass(frozen=True)
class Identity:
    operator: str | None = None
    operand: int | None = None  # accepted syntactically, rejected by validation


@dataclass(frozen=True)
class SuperOf:
    operator: str | None = None
    operand: int | None = None


@dataclass(frozen=True)
class SubOf:
    operator: str | None = None
    operand: int | None = None


@dataclass(frozen=True)
class Both:
    left: "RefSpec"
    right: "RefSpec"


@dataclass(frozen=True)
class And:
    first: "RefSpec"
    then: "RefSpec"


@dataclass(frozen=True)
class That:
    inner: "RefSpec"


@dataclass(frozen=True)
class Arg:
    name: str


RefSpec = Union[Identity, SuperOf, SubOf, Both, And, That, Arg]


@dataclass(frozen=True)
class RefContext:
    """Evaluation context: the frame formula, the universe, bound rule args.

    Invariant: frame and every bound argument are members of the universe.
    Use ``make_context`` to get this for free.
    """

    frame: Formula
    universe: frozenset[Formula]
    bound: tuple[tuple[str, Formula], ...] = ()

    def bound_map(self) -> dict[str, Formula]:
        return dict(self.bound)


def make_context(
    frame: Formula,
    universe: frozenset[Formula] | set[Formula],
    bound: Mapping[str, Formula] | None = None,
) -> RefContext:
    items = tuple(sorted((bound or {}).items()))
    full = frozenset(universe) | {frame} | {f for _, f in items}
    return RefContext(frame, full, items)


def _filter(values: set[Formula], operator: str | None) -> set[Formula]:
    if operator is None:
        return values
    return {f for f in values if principal(f) == operator}


def eval_ref(spec: RefSpec, ctx: RefContext) -> frozenset[Formula]:
    """The set of formulas the reference denotes under the context."""
    if isinstance(spec, Identity):
        if spec.operand is not None:
            raise MisplacedOperandIndexError("Identity takes no operand index")
        return frozenset(_filter({ctx.frame}, spec.operator))
    if isinstance(spec, SubOf):
        if spec.operand is not None:
            f = ctx.frame
            if isinstance(f, Compound) and 1 <= spec.operand <= len(f.operands):
                base = {f.operands[spec.operand - 1]}
            else:
                base = set()
        else:
            base = set(subformulas(ctx.frame))
        return frozenset(_filter(base, spec.operator))
    if isinstance(spec, SuperOf):
        if spec.operand is not None:
            base = {
                g
                for g in ctx.universe
                if isinstance(g, Compound)
                and spec.operand <= len(g.operands)
                and g.operands[spec.operand - 1] == ctx.frame
            }
        else:
            base = {g for g in ctx.universe if ctx.frame in subformulas(g)}
        return frozenset(_filter(base, spec.operator))
    if isinstance(spec, Both):
        return eval_ref(spec.left, ctx) & eval_ref(spec.right, ctx)
    if isinstance(spec, And):
        out: set[Formula] = set()
        for g in eval_ref(spec.first, ctx):
            out |= eval_ref(spec.then, RefContext(g, ctx.universe, ctx.bound))
        return frozenset(out)
    if isinstance(spec, That):
        return frozenset({ctx.frame}) if eval_ref(spec.inner, ctx) else frozenset()
    if isinstance(spec, Arg):
        bound = ctx.bound_map()
        if spec.name not in bound:
            raise UnboundArgumentError(f"argument {spec.name!r} is not bound")
        return frozenset({bound[spec.name]})
    raise TypeError(f"not a RefSpec: {spec!r}")


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


def validate_ref(spec: RefSpec, arg_names: frozenset[str] | set[str]) -> list[ValidationIssue]:
    """Static checks: every Arg resolves, no operand index on Identity."""
    issues: list[ValidationIssue] = []

    def walk(s: RefSpec) -> None:
        if isinstance(s, Identity):
            if s.operand is not None:
                issues.append(
                    ValidationIssue("MisplacedOperandIndex", "Identity takes no operand index")
                )
        elif isinstance(s, (SuperOf, SubOf)):
            if s.operand is not None and s.operand < 1:
                issues.append(
                    ValidationIssue("MisplacedOperandIndex", f"operand index {s.operand} must be >= 1")
                )
        elif isinstance(s, Both):
            walk(s.left)
            walk(s.right)
        elif isinstance(s, And):
            walk(s.first)
            walk(s.then)
        elif isinstance(s, That):
            walk(s.inner)
        elif isinstance(s, Arg):
            if s.name not in arg_names:
                issues.append(ValidationIssue("UnboundArgument", f"argument {s.name!r} is not declared"))
        else:
            issues.append(ValidationIssue("UnknownCombinator", f"not a RefSpec: {s!r}"))

    walk(spec)
    return issues
