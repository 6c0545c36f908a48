"""
Error types for the regularizer.

Every failure the library can report derives from RegularizationError so
callers (the CLI, the HTTP service) can catch one class and map it.
"""

from typing import Optional


class RegularizationError(Exception):
    """Base class for every error raised by the regularizer."""


class GraphFormatError(RegularizationError, ValueError):
    """A graph or witness file could not be parsed."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class WeightLengthError(RegularizationError, ValueError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} weights, got {got}")


class GraphKindError(RegularizationError, ValueError):
    """Operation called on a directed graph where an undirected one is required, or vice versa."""


class ZeroRowOrColumn(RegularizationError):
    """The adjacency matrix has an empty row (sink) or column (source)."""

    def __init__(self, node: int, side: str):
        self.node = node
        self.side = side
        super().__init__(f"adjacency matrix has a zero {side} at node {node}")


class NotPerfect(RegularizationError):
    pass


class NoTotalSupport(RegularizationError):
    pass


class NoSupport(RegularizationError):
    pass


class NotArbitrarilyRegularizable(RegularizationError):
    pass


class AcyclicOnlyTrivial(RegularizationError):
    """B has independent columns: the only solution of B w = 0 is w = 0."""


class TooLarge(RegularizationError):
    def __init__(self, n: int, max_n: int, what: Optional[str] = None):
        self.n = n
        self.max_n = max_n
        label = what or "graph"
        super().__init__(f"{label} too large for exhaustive enumeration: n={n} > {max_n}")


class InvalidWitness(RegularizationError):
    pass


class NoIndependentSet(RegularizationError):
    pass


class InconsistentResult(RegularizationError):
    """An internal identity failed; indicates a bug, never bad input."""


class NotInClass(RegularizationError):
    """The graph is not in the requested class of the hierarchy."""
