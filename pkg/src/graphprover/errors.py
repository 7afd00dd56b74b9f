"""Error types shared across the package.

Every error carries a stable ``code`` string; the HTTP layer surfaces these
codes verbatim in error bodies, so they are part of the public contract and
must not be renamed casually.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all recoverable errors raised by the package."""

    code = "EngineError"

    def __init__(self, message: str, **details: object):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self) -> str:
        return self.message


class DuplicateKeyError(EngineError):
    code = "DuplicateKey"


class UnknownVertexError(EngineError):
    code = "UnknownVertex"


class UnknownEdgeError(EngineError):
    code = "UnknownEdge"


class NoMatchError(EngineError):
    code = "NoMatch"


class TransformFailedError(EngineError):
    code = "TransformFailed"


class FormulaSyntaxError(EngineError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    code = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(message, position=position)
        self.position = position


class UnknownOperatorError(EngineError):
    code = "UnknownOperator"


class ArityError(EngineError):
    code = "ArityError"

    def __init__(self, op: str, expected: int, got: int):
        super().__init__(
            f"operator {op!r} expects {expected} operand(s), got {got}",
            op=op, expected=expected, got=got,
        )
        self.op = op
        self.expected = expected
        self.got = got


class UnboundArgumentError(EngineError):
    code = "UnboundArgument"


class MisplacedOperandIndexError(EngineError):
    code = "MisplacedOperandIndex"


class NotAHypothesisError(EngineError):
    code = "NotAHypothesis"


class ProofImportError(EngineError):
    """Document rejected at import; message names the first violated invariant."""

    code = "ImportError"


class AmbiguousBranchGoalError(EngineError):
    code = "AmbiguousBranchGoal"


class RuleNotApplicableError(EngineError):
    code = "RuleNotApplicable"


class ScopeError(EngineError):
    code = "ScopeError"


class InvalidConclusionError(EngineError):
    code = "InvalidConclusion"


class NonMatchingMPError(EngineError):
    code = "NonMatchingMP"


class NecessitationUnderHypothesisError(EngineError):
    code = "NecessitationUnderHypothesis"


class NothingToUndoError(EngineError):
    code = "NothingToUndo"


class FuelExhaustedError(EngineError):
    code = "FuelExhausted"


class UnknownRuleError(EngineError):
    code = "UnknownRule"


class UnknownStrategyError(EngineError):
    code = "UnknownStrategy"


class UnknownSystemError(EngineError):
    code = "UnknownSystem"


class DuplicateNameError(EngineError):
    code = "DuplicateName"


class SystemFormatError(EngineError):
    """Malformed system-authoring file."""

    code = "SystemFormatError"

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message, line=line)
        self.line = line
