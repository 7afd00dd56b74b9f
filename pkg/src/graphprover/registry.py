"""Deductive systems and the registry that holds them.

A system bundles an operator table, rules, named strategies, and example
goals.  Systems extend each other by name: lookups that miss locally walk
to the parent through the registry at call time, so re-registering a parent
is immediately visible to every extension.
"""

from __future__ import annotations

import importlib.resources

from .errors import (
    DuplicateNameError,
    UnknownRuleError,
    UnknownStrategyError,
    UnknownSystemError,
)
from .fitch import FitchState, new_linear_proof
from .formulas import Formula, parse
from .proofs import ProofState, new_proof
from .rules import BACKWARD, Rule, describe_rule
from .tactics import TacticOutcome, run
from . import authoring

DEFAULT_FUEL = 10000


class DeductiveSystem:
    """One deductive system; parent lookups stay live through the registry."""

    def __init__(
        self,
        name: str,
        style: str,
        table,
        rules: dict[str, Rule],
        strategies: dict[str, tuple],
        examples: tuple[str, ...] = (),
        extends: str | None = None,
        registry: "SystemRegistry | None" = None,
    ):
        self.name = name
        self.style = style
        self.table = table
        self.extends = extends
        self.examples = tuple(examples)
        self._rules = dict(rules)
        self._strategies = dict(strategies)
        self._registry = registry

    def _parent(self) -> "DeductiveSystem | None":
        if self.extends is None:
            return None
        if self._registry is None:
            raise UnknownSystemError(
                f"{self.name} extends {self.extends} but is not in a registry"
            )
        return self._registry.get(self.extends)

    # -- rules ------------------------------------------------------------

    def rule(self, name: str) -> Rule:
        if name in self._rules:
            return self._rules[name]
        parent = self._parent()
        if parent is not None:
            return parent.rule(name)
        raise UnknownRuleError(f"system {self.name!r} has no rule {name!r}")

    def rule_names(self) -> tuple[str, ...]:
        parent = self._parent()
        names = list(parent.rule_names()) if parent is not None else []
        for n in self._rules:
            if n not in names:
                names.append(n)
        return tuple(names)

    def rules(self) -> tuple[Rule, ...]:
        return tuple(self.rule(n) for n in self.rule_names())

    # -- strategies ---------------------------------------------------------

    def strategy(self, name: str) -> tuple:
        """The (tactic, full) pair registered under name."""
        if name in self._strategies:
            return self._strategies[name]
        parent = self._parent()
        if parent is not None:
            return parent.strategy(name)
        raise UnknownStrategyError(f"system {self.name!r} has no strategy {name!r}")

    def strategy_names(self) -> tuple[str, ...]:
        parent = self._parent()
        names = list(parent.strategy_names()) if parent is not None else []
        for n in self._strategies:
            if n not in names:
                names.append(n)
        return tuple(names)

    # -- proof states ---------------------------------------------------------

    def parse_formula(self, text: str | Formula) -> Formula:
        if isinstance(text, Formula):
            return text
        return parse(self.table, text)

    def new_state(self, goal: str | Formula):
        goal = self.parse_formula(goal)
        if self.style == BACKWARD:
            return new_proof(self.table, goal, system=self.name)
        return new_linear_proof(self.table, goal, system=self.name)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "style": self.style,
            "extends": self.extends,
            "rules": list(self.rule_names()),
            "ruleInfo": [describe_rule(r, self.table) for r in self.rules()],
            "strategies": list(self.strategy_names()),
            "examples": list(self.examples),
        }


class SystemRegistry:
    def __init__(self):
        self._systems: dict[str, DeductiveSystem] = {}

    def register(self, system: DeductiveSystem) -> DeductiveSystem:
        if system.name in self._systems:
            raise DuplicateNameError(f"system {system.name!r} is already registered")
        return self.replace(system)

    def replace(self, system: DeductiveSystem) -> DeductiveSystem:
        """Install or overwrite; extensions see the new version immediately."""
        system._registry = self
        self._systems[system.name] = system
        return system

    def get(self, name: str) -> DeductiveSystem:
        if name not in self._systems:
            raise UnknownSystemError(f"no system named {name!r}")
        return self._systems[name]

    def names(self) -> tuple[str, ...]:
        return tuple(self._systems)

    def catalog(self) -> list[dict]:
        return [self._systems[n].describe() for n in self._systems]

    def load_text(self, text: str, replace: bool = False) -> DeductiveSystem:
        decl = authoring.parse_declarations(text)
        parent = self.get(decl.extends) if decl.extends else None
        built = authoring.assemble(decl, parent)
        system = DeductiveSystem(
            built.name,
            built.style,
            built.table,
            built.rules,
            built.strategies,
            built.examples,
            built.extends,
        )
        return self.replace(system) if replace else self.register(system)


def load_builtin_systems(registry: SystemRegistry | None = None) -> SystemRegistry:
    """Load the packaged system files, parents before extensions."""
    registry = registry or SystemRegistry()
    root = importlib.resources.files(__package__) / "systems"
    order = (
        "nd-minimal",
        "nd-intuitionistic",
        "nd-classical",
        "fitch-intuitionistic",
        "fitch-classical",
        "hilbert-k",
    )
    for name in order:
        registry.load_text((root / f"{name}.sys").read_text(encoding="utf-8"))
    return registry


_default: SystemRegistry | None = None


def default_registry() -> SystemRegistry:
    global _default
    if _default is None:
        _default = load_builtin_systems()
    return _default


def _is_complete(state) -> bool:
    if isinstance(state, ProofState):
        return state.is_complete()
    if isinstance(state, FitchState):
        return state.complete()
    return False


def prove_with_strategy(
    system: DeductiveSystem,
    goal: str | Formula,
    strategy: str = "auto",
    fuel: int = DEFAULT_FUEL,
):
    """Run a named strategy against a fresh proof of goal.

    Returns (outcome, state).  A strategy flagged full promises a finished
    proof: if its tactic succeeds but goals stay open, the steps are rolled
    back and the outcome is a failure.
    """
    tactic, full = system.strategy(strategy)
    state = system.new_state(goal)
    start = state.mark()
    outcome = run(tactic, state, system=system, fuel=fuel)
    if full and outcome.succeeded and not _is_complete(state):
        state.rollback(start)
        outcome = TacticOutcome("failure", (), reason="proof left unfinished")
    return outcome, state
