"""Exception types shared across the package.

Everything raised deliberately by the library derives from DglError so
callers (and the CLI) can distinguish our diagnostics from genuine bugs.
"""

from __future__ import annotations


class DglError(Exception):
    """Base class for all library errors."""


class DegreeGapError(DglError):
    """A skeleton graph mentions placeholder i but not some j < i."""

    def __init__(self, missing: int, max_index: int):
        self.missing = missing
        self.max_index = max_index
        super().__init__(
            f"skeleton graph uses placeholder *{max_index} but *{missing} never occurs"
        )


class CollisionError(DglError):
    """Substitution mapped two distinct skeleton nodes to the same string."""

    def __init__(self, value: str):
        self.value = value
        super().__init__(f"substitution maps two distinct nodes to {value!r}")


class ParseError(DglError):
    """Input text violates the formula or term grammar.

    Carries the offset into the source text and the set of token kinds that
    would have been acceptable there.
    """

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"{message} (at offset {position}"
        if expected:
            detail += ", expected " + " or ".join(expected)
        detail += ")"
        super().__init__(detail)


class NotClosedError(DglError):
    """A closed formula was required but free variables remain."""

    def __init__(self, names: tuple[str, ...]):
        self.names = names
        super().__init__("formula has free variables: " + ", ".join(sorted(names)))


class UnboundVariable(DglError):
    """Evaluation consulted a variable the assignment does not cover."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name} is not assigned")


class UnknownSymbol(DglError):
    """The interpretation does not cover a symbol the formula uses."""

    def __init__(self, name: str, arity: int, kind: str = "symbol"):
        self.name = name
        self.arity = arity
        super().__init__(f"{kind} {name}/{arity} is not interpreted")


class TableMiss(DglError):
    """A function-symbol lookup table has no row for the evaluated arguments."""

    def __init__(self, name: str, args: tuple[str, ...]):
        self.name = name
        self.args = args
        shown = ", ".join(args)
        super().__init__(f"function {name} has no value for ({shown})")


class ArityMismatch(DglError):
    """A formula-family builder received arguments of the wrong length."""


class BoundExceeded(DglError):
    """A size or work bound was exceeded; raise rather than grind."""


class InvalidModelError(DglError):
    """A graph fails the equivalence-argumentation model shape checks.

    `problems` lists one human-readable string per violation, each naming the
    offending node or edge.
    """

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class DecodeError(DglError):
    """A propositional variable name does not decode to a ground atom."""


class MissingVar(DglError):
    """Propositional evaluation hit a variable absent from the valuation."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no truth value for propositional variable {name!r}")
