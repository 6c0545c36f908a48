"""
Graph representation, the incidence system B of B w = r e, node strengths
and exact verification of regularization witnesses.

Node indices are 1-based in every public value; numpy arrays handed to the
other modules are 0-based.
"""

import logging
import re
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Annotated, Any, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
    model_validator,
)

from errors import GraphKindError, WeightLengthError

logger = logging.getLogger(__name__)

# =============================================================================
# EXACT RATIONALS
# =============================================================================
_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(value: Any) -> Fraction:
    """Accept a Fraction, an int or a "p/q" string; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_PATTERN.match(text):
            raise ValueError(f"not a rational of the form p or p/q: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}")
    raise ValueError(f"cannot read {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": _RATIONAL_PATTERN.pattern}),
]

# =============================================================================
# GRAPH
# =============================================================================
class Graph(BaseModel):
    """
    What: A topology on nodes 1..n with edges enumerated 1..m
    Edges are (tail, head) pairs; for undirected graphs the order inside a
    pair carries no meaning. Self-loops are allowed, multi-edges are not.
    """

    model_config = ConfigDict(frozen=True)

    directed: bool
    node_count: int = Field(gt=0)
    edges: Tuple[Tuple[int, int], ...] = ()

    @model_validator(mode="after")
    def _check_edges(self) -> "Graph":
        n = self.node_count
        seen = set()
        for index, (tail, head) in enumerate(self.edges, start=1):
            if not (1 <= tail <= n and 1 <= head <= n):
                raise ValueError(f"edge {index} ({tail}, {head}) has an endpoint outside 1..{n}")
            key = (tail, head) if self.directed or tail <= head else (head, tail)
            if key in seen:
                raise ValueError(f"edge {index} ({tail}, {head}) duplicates an earlier edge")
            seen.add(key)
        return self

    # Cached numpy views live in __dict__, so equality and hashing are
    # restricted to the declared fields.
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.directed, self.node_count, self.edges) == (
            other.directed,
            other.node_count,
            other.edges,
        )

    def __hash__(self) -> int:
        return hash((self.directed, self.node_count, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def row_count(self) -> int:
        """Rows of the incidence system: n undirected, 2n directed."""
        return 2 * self.node_count if self.directed else self.node_count

    @cached_property
    def endpoint_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """0-based (tails, heads) as int64 arrays."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        pairs = np.asarray(self.edges, dtype=np.int64) - 1
        return pairs[:, 0].copy(), pairs[:, 1].copy()

    def degrees(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Directed: (out-degrees, in-degrees).
        Undirected: (degrees, degrees) with a loop counted once.
        """
        tails, heads = self.endpoint_arrays
        n = self.node_count
        if self.directed:
            return np.bincount(tails, minlength=n), np.bincount(heads, minlength=n)
        degree = np.bincount(tails, minlength=n) + np.bincount(heads[heads != tails], minlength=n)
        return degree, degree

    @cached_property
    def sparse_adjacency(self) -> sp.csr_matrix:
        """n×n 0/1 adjacency matrix; symmetric for undirected graphs."""
        tails, heads = self.endpoint_arrays
        n = self.node_count
        if not self.directed:
            off = tails != heads
            tails, heads = np.concatenate([tails, heads[off]]), np.concatenate([heads, tails[off]])
        data = np.ones(len(tails), dtype=np.int8)
        matrix = sp.csr_matrix((data, (tails, heads)), shape=(n, n))
        matrix.sort_indices()
        return matrix

    def adjacency_matrix(self) -> np.ndarray:
        return self.sparse_adjacency.toarray()

    @classmethod
    def from_matrix(cls, matrix: Any, directed: bool = True) -> "Graph":
        """Build the graph G_A of a square 0/1 pattern; nonzeros become edges in row-major order."""
        pattern = np.asarray(matrix) != 0
        if pattern.ndim != 2 or pattern.shape[0] != pattern.shape[1] or pattern.shape[0] == 0:
            raise ValueError("adjacency matrix must be square and non-empty")
        if not directed and not np.array_equal(pattern, pattern.T):
            raise ValueError("an undirected graph needs a symmetric adjacency matrix")
        rows, cols = np.nonzero(pattern)
        edges = [
            (int(i) + 1, int(j) + 1)
            for i, j in zip(rows, cols)
            if directed or i <= j
        ]
        return cls(directed=directed, node_count=pattern.shape[0], edges=tuple(edges))

    def symmetric_digraph(self) -> "Graph":
        """Directed graph of the symmetric adjacency matrix: {i,j} -> (i,j),(j,i); a loop once."""
        if self.directed:
            return self
        edges: List[Tuple[int, int]] = []
        for tail, head in self.edges:
            edges.append((tail, head))
            if tail != head:
                edges.append((head, tail))
        return Graph(directed=True, node_count=self.node_count, edges=tuple(edges))

    def reverse(self) -> "Graph":
        if not self.directed:
            raise GraphKindError("reverse() is defined for directed graphs")
        return Graph(
            directed=True,
            node_count=self.node_count,
            edges=tuple((head, tail) for tail, head in self.edges),
        )


# =============================================================================
# INCIDENCE SYSTEM
# =============================================================================
class IncidenceSystem(BaseModel):
    """The 0/1 matrix B, stored column by column as 1-based row indices."""

    model_config = ConfigDict(frozen=True)

    row_count: int
    column_rows: Tuple[Tuple[int, ...], ...]

    @property
    def column_count(self) -> int:
        return len(self.column_rows)

    def to_sparse(self) -> sp.csc_matrix:
        rows = [r - 1 for column in self.column_rows for r in column]
        cols = [c for c, column in enumerate(self.column_rows) for _ in column]
        data = np.ones(len(rows), dtype=np.int64)
        return sp.csc_matrix((data, (rows, cols)), shape=(self.row_count, self.column_count))

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def apply(self, values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """Exact product B·values."""
        if len(values) != self.column_count:
            raise WeightLengthError(self.column_count, len(values))
        totals = [Fraction(0)] * self.row_count
        for rows, value in zip(self.column_rows, values):
            if value:
                for row in rows:
                    totals[row - 1] += value
        return tuple(totals)


def build_incidence(g: Graph) -> IncidenceSystem:
    n = g.node_count
    if g.directed:
        columns = tuple((tail, n + head) for tail, head in g.edges)
    else:
        columns = tuple((tail, head) if tail != head else (tail,) for tail, head in g.edges)
    logger.debug("incidence system %dx%d", g.row_count, len(columns))
    return IncidenceSystem(row_count=g.row_count, column_rows=columns)


# =============================================================================
# WEIGHT ASSIGNMENTS
# =============================================================================
class WeightAssignment(BaseModel):
    """One exact weight per edge (edge order) and the regularization degree r."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[Rational, ...]
    degree: Rational

    @property
    def is_integral(self) -> bool:
        return self.degree.denominator == 1 and all(w.denominator == 1 for w in self.weights)

    @property
    def is_zero(self) -> bool:
        return not any(self.weights)

    @property
    def is_positive(self) -> bool:
        return all(w > 0 for w in self.weights)

    @property
    def is_nonnegative(self) -> bool:
        return all(w >= 0 for w in self.weights)

    def scaled(self, factor: Union[int, Fraction]) -> "WeightAssignment":
        factor = Fraction(factor)
        return WeightAssignment(
            weights=tuple(w * factor for w in self.weights),
            degree=self.degree * factor,
        )


def _weights_of(w: Union[WeightAssignment, Sequence[Any]]) -> Tuple[Fraction, ...]:
    if isinstance(w, WeightAssignment):
        return w.weights
    return tuple(parse_rational(value) for value in w)


def strengths(g: Graph, w: Union[WeightAssignment, Sequence[Any]]) -> Tuple[Fraction, ...]:
    """
    Node strengths B·w: n values for undirected graphs, 2n for directed ones
    (out-strengths, then in-strengths). A loop counts once.
    """
    weights = _weights_of(w)
    if len(weights) != g.edge_count:
        raise WeightLengthError(g.edge_count, len(weights))
    return build_incidence(g).apply(weights)


def verify_assignment(g: Graph, w: WeightAssignment) -> bool:
    """True iff B·w = r·e exactly, r > 0 and w is not the zero vector."""
    totals = strengths(g, w)
    if w.degree <= 0 or w.is_zero:
        return False
    return all(total == w.degree for total in totals)


def normalize_assignment(w: WeightAssignment) -> WeightAssignment:
    """Smallest integral multiple: clear denominators, then divide by the common gcd."""
    values = list(w.weights) + [w.degree]
    if not any(values):
        return w
    common_denominator = lcm(*(v.denominator for v in values))
    integers = [int(v * common_denominator) for v in values]
    divisor = 0
    for value in integers:
        divisor = gcd(divisor, value)
    integers = [value // divisor for value in integers]
    return WeightAssignment(
        weights=tuple(Fraction(v) for v in integers[:-1]),
        degree=Fraction(integers[-1]),
    )
