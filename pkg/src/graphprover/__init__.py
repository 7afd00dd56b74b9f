"""graphprover: theorem proving over an embedded labeled property graph.

The package keeps proof states as labeled property graphs: formulas form a
shared DAG of hash-consed vertices, deductions form a tree layered on top,
and every rule application is a transactional graph transformation that can
be undone. Proof search is driven by backtracking tactic combinators, and
deductive systems themselves are data, loaded from authoring files.
"""

__version__ = "0.1.0"
