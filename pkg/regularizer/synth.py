"""
Witness construction for every class of the hierarchy.

  positive      sum of one perfect matching of G* per edge (Q_u = P_u + P_uᵀ
                for undirected graphs), then normalized
  nonnegative   one perfect matching: 0/1 weights with r = 1 (directed) or
                0/1/2 weights with r = 2 (undirected)
  arbitrary     exact solve of B w = e per component over a greedily chosen
                nonsingular square submatrix M, then normalized
  kernel        a nonzero w with B w = 0 from the first dependent column of B

All arithmetic is exact (fractions.Fraction over Python integers).
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from classify import is_arbitrarily_regularizable, is_regular
from errors import (
    AcyclicOnlyTrivial,
    InconsistentResult,
    NoSupport,
    NoTotalSupport,
    NotArbitrarilyRegularizable,
)
from graph_core import (
    Graph,
    Rational,
    WeightAssignment,
    build_incidence,
    normalize_assignment,
    verify_assignment,
)
from matching import covering_matchings, has_support, has_total_support, matching_to_cycle_forest, max_matching
from transform import bipartite_partition, star_component_labels, star_transform

logger = logging.getLogger(__name__)

SparseVector = Dict[int, Fraction]


# =============================================================================
# REPORTS
# =============================================================================
class ComponentSolve(BaseModel):
    """Solve summary for one component (rows are 1-based rows of B)."""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[int, ...]
    dropped_row: Optional[int] = None
    pivot_columns: Tuple[int, ...]
    determinant: int


class LinearSolveReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    pivot_columns: Tuple[int, ...]
    determinant: int
    scale: Rational
    kernel_dimension: int
    components: Tuple[ComponentSolve, ...] = ()


# =============================================================================
# EXACT LINEAR ALGEBRA
# =============================================================================
class _IncrementalBasis:
    """
    Column space grown one column at a time. Each stored vector has a pivot
    row set to 1 and is zero on the pivots stored before it; reducing a new
    column through the pivots in insertion order leaves its residual.
    `expressions` track every stored vector as a combination of the original
    columns.
    """

    def __init__(self) -> None:
        self.pivots: List[int] = []
        self.vectors: Dict[int, SparseVector] = {}
        self.expressions: Dict[int, SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, column: int, rows: Sequence[int]) -> Tuple[SparseVector, SparseVector]:
        residual: SparseVector = {row: Fraction(1) for row in rows}
        expression: SparseVector = {column: Fraction(1)}
        for pivot in self.pivots:
            factor = residual.get(pivot)
            if not factor:
                continue
            for row, value in self.vectors[pivot].items():
                updated = residual.get(row, Fraction(0)) - factor * value
                if updated:
                    residual[row] = updated
                else:
                    residual.pop(row, None)
            for col, value in self.expressions[pivot].items():
                updated = expression.get(col, Fraction(0)) - factor * value
                if updated:
                    expression[col] = updated
                else:
                    expression.pop(col, None)
        return residual, expression

    def add(self, column: int, rows: Sequence[int]) -> Optional[SparseVector]:
        """Store the column if it raises the rank; otherwise return its kernel combination."""
        residual, expression = self.reduce(column, rows)
        if not residual:
            return expression
        pivot = min(residual)
        scale = residual[pivot]
        self.pivots.append(pivot)
        self.vectors[pivot] = {row: value / scale for row, value in residual.items()}
        self.expressions[pivot] = {col: value / scale for col, value in expression.items()}
        return None


def _solve_square(
    rows: Sequence[int], columns: Sequence[int], column_rows: Sequence[Tuple[int, ...]]
) -> Tuple[List[Fraction], int]:
    """
    Gauss-Jordan on M x = e with M the 0/1 submatrix (rows × columns).
    Returns x and |det M|.
    """
    row_position = {row: position for position, row in enumerate(rows)}
    size = len(rows)
    matrix: List[SparseVector] = [dict() for _ in range(size)]
    for position, column in enumerate(columns):
        for row in column_rows[column - 1]:
            if row in row_position:
                matrix[row_position[row]][position] = Fraction(1)
    rhs = [Fraction(1)] * size

    determinant = Fraction(1)
    pivot_of_column: Dict[int, int] = {}
    unused = set(range(size))
    for position in range(size):
        candidates = [r for r in unused if matrix[r].get(position)]
        if not candidates:
            raise InconsistentResult("selected columns are singular")
        pivot_row = min(candidates)
        unused.discard(pivot_row)
        pivot_of_column[position] = pivot_row
        pivot = matrix[pivot_row][position]
        determinant *= pivot
        normalized = {col: value / pivot for col, value in matrix[pivot_row].items()}
        matrix[pivot_row] = normalized
        rhs[pivot_row] /= pivot
        for other in range(size):
            factor = matrix[other].get(position) if other != pivot_row else None
            if not factor:
                continue
            row = matrix[other]
            for col, value in normalized.items():
                updated = row.get(col, Fraction(0)) - factor * value
                if updated:
                    row[col] = updated
                else:
                    row.pop(col, None)
            rhs[other] -= factor * rhs[pivot_row]
    solution = [rhs[pivot_of_column[position]] for position in range(size)]
    return solution, abs(int(determinant))


# =============================================================================
# REGULAR AND POSITIVE
# =============================================================================
def regular_witness(g: Graph) -> WeightAssignment:
    """All weights 1; r is the common degree."""
    if not is_regular(g):
        raise InconsistentResult("regular_witness called on a graph that is not regular")
    degree = int(g.degrees()[0][0])
    return WeightAssignment(weights=tuple(Fraction(1) for _ in g.edges), degree=Fraction(degree))


def _checked(g: Graph, w: WeightAssignment, label: str) -> WeightAssignment:
    if not verify_assignment(g, w):
        raise InconsistentResult(f"{label} witness fails B w = r e")
    return w


def synth_positive(g: Graph) -> WeightAssignment:
    """
    Directed: W = Σ_u P_u with P_u a permutation inside the pattern covering
    edge u, so W e = Wᵀ e = m e. Undirected: Σ_u (P_u + P_uᵀ) with r = 2m.
    The result is normalized to gcd 1.
    """
    if not has_total_support(g):
        raise NoTotalSupport("some edge lies on no spanning cycle forest")
    sg = star_transform(g)
    counts = [0] * g.edge_count
    matchings = covering_matchings(g)
    for matching in matchings:
        forest = matching_to_cycle_forest(sg, matching)
        for edge, times in zip(forest.edges, forest.multiplicity):
            counts[edge - 1] += times
    degree = len(matchings) if g.directed else 2 * len(matchings)
    raw = WeightAssignment(weights=tuple(Fraction(c) for c in counts), degree=Fraction(degree))
    _checked(g, raw, "positive")
    return normalize_assignment(raw)


def synth_nonnegative(g: Graph) -> WeightAssignment:
    """One spanning cycle forest: {0,1} with r = 1 (directed), {0,1,2} with r = 2 (undirected)."""
    if not has_support(g):
        raise NoSupport("G* has no perfect matching")
    sg = star_transform(g)
    forest = matching_to_cycle_forest(sg, max_matching(sg))
    weights = tuple(Fraction(c) for c in forest.as_weights(g.edge_count))
    degree = Fraction(1 if g.directed else 2)
    return _checked(g, WeightAssignment(weights=weights, degree=degree), "nonnegative")


# =============================================================================
# ARBITRARY
# =============================================================================
def _components(g: Graph) -> List[Tuple[List[int], List[int], bool, Dict[int, int]]]:
    """
    (rows, columns, bipartite, side) per component of the incidence system.
    side maps a row to ±1 (the separating vector) for bipartite components.
    """
    components = []
    if g.directed:
        n = g.node_count
        count, labels = star_component_labels(g)
        rows_of: Dict[int, List[int]] = {}
        for row, label in enumerate(labels.tolist(), start=1):
            rows_of.setdefault(label, []).append(row)
        tails, _ = g.endpoint_arrays
        columns_of: Dict[int, List[int]] = {}
        for edge, label in enumerate(labels[tails].tolist(), start=1):
            columns_of.setdefault(label, []).append(edge)
        for label, rows in rows_of.items():
            side = {row: (1 if row <= n else -1) for row in rows}
            components.append((rows, columns_of.get(label, []), True, side))
    else:
        tails, _ = g.endpoint_arrays
        component_of: Dict[int, int] = {}
        parts = bipartite_partition(g).components
        for position, part in enumerate(parts):
            for node in part.nodes:
                component_of[node] = position
        columns_of = {}
        for edge, tail in enumerate((tails + 1).tolist(), start=1):
            columns_of.setdefault(component_of[tail], []).append(edge)
        for position, part in enumerate(parts):
            side = {}
            if part.bipartite:
                side = {node: 1 for node in part.u_part}
                side.update({node: -1 for node in part.w_part})
            components.append((list(part.nodes), columns_of.get(position, []), part.bipartite, side))
    components.sort(key=lambda item: item[0][0])
    return components


def synth_arbitrary(g: Graph) -> Tuple[WeightAssignment, LinearSolveReport]:
    """
    Per component: keep every row when the component is non-bipartite, drop
    the highest-index row when it is balanced bipartite (the separating
    vector fixes that row). Columns enter M in edge order when they raise
    the rank; x = M⁻¹ e with zeros elsewhere.
    """
    regularizable, certificate = is_arbitrarily_regularizable(g)
    if not regularizable:
        raise NotArbitrarilyRegularizable(certificate.description if certificate else "")
    column_rows = build_incidence(g).column_rows
    weights = [Fraction(0)] * g.edge_count
    determinant = 1
    solves: List[ComponentSolve] = []
    rank = 0

    for rows, columns, bipartite, side in _components(g):
        if bipartite:
            for column in columns:
                if sum(side[row] for row in column_rows[column - 1]) != 0:
                    raise InconsistentResult(f"separating vector fails on column {column}")
        dropped = max(rows) if bipartite else None
        kept = [row for row in rows if row != dropped]
        kept_set = set(kept)
        basis = _IncrementalBasis()
        pivots: List[int] = []
        for column in columns:
            if basis.rank == len(kept):
                break
            restricted = [row for row in column_rows[column - 1] if row in kept_set]
            if basis.add(column, restricted) is None:
                pivots.append(column)
        if basis.rank != len(kept):
            raise InconsistentResult(f"component at row {rows[0]} has rank {basis.rank} < {len(kept)}")
        solution, component_det = _solve_square(kept, pivots, column_rows)
        for column, value in zip(pivots, solution):
            weights[column - 1] = value
        determinant *= component_det
        rank += len(kept)
        solves.append(
            ComponentSolve(
                rows=tuple(kept),
                dropped_row=dropped,
                pivot_columns=tuple(pivots),
                determinant=component_det,
            )
        )

    raw = _checked(g, WeightAssignment(weights=tuple(weights), degree=Fraction(1)), "arbitrary")
    witness = normalize_assignment(raw)
    report = LinearSolveReport(
        pivot_columns=tuple(sorted(c for solve in solves for c in solve.pivot_columns)),
        determinant=determinant,
        scale=witness.degree,
        kernel_dimension=g.edge_count - rank,
        components=tuple(solves),
    )
    logger.debug("arbitrary witness: |det M| = %d, scale %s", determinant, witness.degree)
    return witness, report


# =============================================================================
# KERNEL
# =============================================================================
def kernel_witness(g: Graph) -> WeightAssignment:
    """
    Nonzero integral w with B w = 0 and r = 0, taken from the first column of
    B (edge order) that depends on the earlier ones. The first nonzero entry
    is positive. Raises AcyclicOnlyTrivial when the columns are independent.
    """
    column_rows = build_incidence(g).column_rows
    basis = _IncrementalBasis()
    for column, rows in enumerate(column_rows, start=1):
        expression = basis.add(column, rows)
        if expression is None:
            continue
        values = [expression.get(edge, Fraction(0)) for edge in range(1, g.edge_count + 1)]
        first = next(value for value in values if value)
        if first < 0:
            values = [-value for value in values]
        witness = normalize_assignment(WeightAssignment(weights=tuple(values), degree=Fraction(0)))
        if any(build_incidence(g).apply(witness.weights)):
            raise InconsistentResult("kernel witness does not satisfy B w = 0")
        return witness
    raise AcyclicOnlyTrivial(f"the {g.edge_count} columns of B are linearly independent")
