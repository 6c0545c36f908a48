"""
Brute-force tools at desk scale.

  vulnerability        max over nonempty independent S of |S| - |N(S)|
  oracle_classify      the hierarchy decided by enumerating permutations
                       inside the adjacency pattern and by an exact rank test
  alternating paths    edge classes found by walking alternating paths

Every enumeration is exponential and refuses inputs above its configured cap
with TooLarge.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict

import config
from classify import Category, HierarchyVerdict
from errors import GraphKindError, NoIndependentSet, TooLarge
from graph_core import Graph, WeightAssignment, build_incidence, normalize_assignment
from transform import EdgeClass, EdgeClassPartition

logger = logging.getLogger(__name__)


# =============================================================================
# VULNERABILITY
# =============================================================================
class VulnerabilityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    witness: Tuple[int, ...]
    neighbourhood: Tuple[int, ...] = ()


def _neighbour_masks(g: Graph) -> Tuple[List[int], int]:
    """Open neighbourhood bitmask per node and the mask of nodes without a loop."""
    masks = [0] * g.node_count
    loopless = (1 << g.node_count) - 1
    for tail, head in g.edges:
        if tail == head:
            loopless &= ~(1 << (tail - 1))
            continue
        masks[tail - 1] |= 1 << (head - 1)
        masks[head - 1] |= 1 << (tail - 1)
    return masks, loopless


def _nodes_of(mask: int) -> Tuple[int, ...]:
    nodes = []
    node = 1
    while mask:
        if mask & 1:
            nodes.append(node)
        mask >>= 1
        node += 1
    return tuple(nodes)


def vulnerability(g: Graph, max_n: Optional[int] = None) -> VulnerabilityReport:
    """
    Depth-first enumeration of independent sets in lexicographic order; the
    first maximizer met is the lexicographically smallest one. Nodes with a
    loop never join an independent set.
    """
    if g.directed:
        raise GraphKindError("vulnerability is defined for undirected graphs")
    cap = config.VULN_MAX_N if max_n is None else max_n
    if g.node_count > cap:
        raise TooLarge(g.node_count, cap, "vulnerability")
    masks, loopless = _neighbour_masks(g)
    if not loopless:
        raise NoIndependentSet("every node carries a loop")

    n = g.node_count
    best_value: Optional[int] = None
    best_set = 0

    def extend(chosen: int, size: int, neighbours: int, allowed: int, start: int) -> None:
        nonlocal best_value, best_set
        for node in range(start, n):
            bit = 1 << node
            if not allowed & bit:
                continue
            grown = chosen | bit
            grown_neighbours = neighbours | masks[node]
            value = size + 1 - bin(grown_neighbours).count("1")
            if best_value is None or value > best_value:
                best_value, best_set = value, grown
            extend(grown, size + 1, grown_neighbours, allowed & ~masks[node], node + 1)

    extend(0, 0, 0, loopless, 0)
    neighbourhood = 0
    for node in _nodes_of(best_set):
        neighbourhood |= masks[node - 1]
    logger.debug("vulnerability %d attained by %s", best_value, _nodes_of(best_set))
    return VulnerabilityReport(
        value=best_value,
        witness=_nodes_of(best_set),
        neighbourhood=_nodes_of(neighbourhood),
    )


def double_hub_graph(n: int) -> Graph:
    """Nodes 1 and n joined to each other and to every interior node; the interior is independent."""
    if n < 3:
        raise ValueError("double_hub_graph needs n >= 3")
    edges = [(1, j) for j in range(2, n + 1)]
    edges += [(j, n) for j in range(2, n)]
    return Graph(directed=False, node_count=n, edges=tuple(edges))


def satisfies_berge_condition(g: Graph, max_n: Optional[int] = None) -> bool:
    """|S| <= |N(S)| for every independent S (vacuous when there is none)."""
    try:
        return vulnerability(g, max_n).value <= 0
    except NoIndependentSet:
        return True


def is_two_bicritical(g: Graph, max_n: Optional[int] = None) -> bool:
    """|S| < |N(S)| for every independent S."""
    try:
        return vulnerability(g, max_n).value < 0
    except NoIndependentSet:
        return True


# =============================================================================
# ALTERNATING PATHS
# =============================================================================
def alternating_path_classes(g: Graph) -> EdgeClassPartition:
    """
    Classes of the alternating-path relation found by walking the paths:
    from an edge, the next one shares its tail, then its head, and so on
    alternately (either side may come first). Every edge relates to itself.
    """
    if not g.directed:
        raise GraphKindError("alternating paths are defined on directed graphs")
    if g.edge_count > config.ALT_PATH_MAX_EDGES:
        raise TooLarge(g.edge_count, config.ALT_PATH_MAX_EDGES, "alternating path enumeration")
    edges = g.edges
    m = len(edges)

    def reachable(start: int) -> Set[int]:
        # state: (edge, side the next step must share) with side 0 tail, 1 head
        seen = {(start, 0), (start, 1)}
        stack = [(start, 0), (start, 1)]
        while stack:
            current, side = stack.pop()
            for other in range(m):
                if other != current and edges[other][side] == edges[current][side]:
                    state = (other, 1 - side)
                    if state not in seen:
                        seen.add(state)
                        stack.append(state)
        return {edge for edge, _ in seen}

    assigned: Dict[int, int] = {}
    groups: List[List[int]] = []
    for edge in range(m):
        if edge in assigned:
            continue
        members = sorted(reachable(edge))
        for member in members:
            assigned[member] = len(groups)
        groups.append(members)
    classes = [
        EdgeClass(
            edges=tuple(e + 1 for e in members),
            whites=tuple(sorted({edges[e][0] for e in members})),
            blacks=tuple(sorted({edges[e][1] for e in members})),
        )
        for members in groups
    ]
    return EdgeClassPartition(classes=tuple(classes))


# =============================================================================
# HIERARCHY ORACLE
# =============================================================================
def _pattern_rows(g: Graph) -> List[List[int]]:
    """Column indices (0-based) of each adjacency row; undirected graphs are symmetric."""
    rows: List[List[int]] = [[] for _ in range(g.node_count)]
    for tail, head in g.edges:
        rows[tail - 1].append(head - 1)
        if not g.directed and tail != head:
            rows[head - 1].append(tail - 1)
    return [sorted(row) for row in rows]


def _permutations_inside(rows: List[List[int]]) -> Iterator[Tuple[int, ...]]:
    """Every σ with σ(i) in row i, by backtracking over rows in order."""
    n = len(rows)
    chosen: List[int] = []
    used = [False] * n

    def place(row: int) -> Iterator[Tuple[int, ...]]:
        if row == n:
            yield tuple(chosen)
            return
        for col in rows[row]:
            if not used[col]:
                used[col] = True
                chosen.append(col)
                yield from place(row + 1)
                chosen.pop()
                used[col] = False

    yield from place(0)


def _covering_permutations(rows: List[List[int]]) -> List[Tuple[int, ...]]:
    """Permutations that each cover a new pattern entry; stops once all are covered."""
    pattern = {(i, j) for i, row in enumerate(rows) for j in row}
    covered: Set[Tuple[int, int]] = set()
    picked = []
    for sigma in _permutations_inside(rows):
        entries = {(i, j) for i, j in enumerate(sigma)}
        if not entries <= covered:
            picked.append(sigma)
            covered |= entries
            if covered == pattern:
                break
    return picked


def _weights_from_permutations(g: Graph, perms: List[Tuple[int, ...]]) -> WeightAssignment:
    """Σ P (directed, r = #P) or Σ (P + Pᵀ) (undirected, r = 2·#P), read off on the edges."""
    totals: Dict[Tuple[int, int], int] = {}
    for sigma in perms:
        for i, j in enumerate(sigma):
            totals[(i, j)] = totals.get((i, j), 0) + 1
    weights = []
    for tail, head in g.edges:
        i, j = tail - 1, head - 1
        if g.directed:
            weights.append(totals.get((i, j), 0))
        elif i == j:
            weights.append(2 * totals.get((i, i), 0))
        else:
            weights.append(totals.get((i, j), 0) + totals.get((j, i), 0))
    degree = len(perms) if g.directed else 2 * len(perms)
    return WeightAssignment(weights=tuple(Fraction(w) for w in weights), degree=Fraction(degree))


def _particular_solution(g: Graph) -> Optional[List[Fraction]]:
    """Dense Gauss-Jordan on [B | e]; a solution with free variables at 0, or None if inconsistent."""
    dense = build_incidence(g).to_dense()
    m = g.edge_count
    augmented = [[Fraction(int(v)) for v in row] + [Fraction(1)] for row in dense]
    pivot_cols: List[int] = []
    rank = 0
    for col in range(m):
        pivot = next((r for r in range(rank, len(augmented)) if augmented[r][col] != 0), None)
        if pivot is None:
            continue
        augmented[rank], augmented[pivot] = augmented[pivot], augmented[rank]
        lead = augmented[rank][col]
        augmented[rank] = [value / lead for value in augmented[rank]]
        for r in range(len(augmented)):
            if r != rank and augmented[r][col] != 0:
                factor = augmented[r][col]
                augmented[r] = [a - factor * b for a, b in zip(augmented[r], augmented[rank])]
        pivot_cols.append(col)
        rank += 1
    # rank(B) < rank([B | e])
    if any(row[m] != 0 for row in augmented[rank:]):
        return None
    solution = [Fraction(0)] * m
    for r, col in enumerate(pivot_cols):
        solution[col] = augmented[r][m]
    return solution


def oracle_classify(g: Graph) -> HierarchyVerdict:
    cap = config.ORACLE_MAX_DIRECTED if g.directed else config.ORACLE_MAX_UNDIRECTED
    if g.node_count > cap:
        raise TooLarge(g.node_count, cap, "oracle")
    rows = _pattern_rows(g)
    row_sums = [len(row) for row in rows]
    col_sums = [0] * g.node_count
    for row in rows:
        for col in row:
            col_sums[col] += 1

    degree = row_sums[0]
    if degree > 0 and all(s == degree for s in row_sums + col_sums):
        ones = WeightAssignment(weights=tuple(Fraction(1) for _ in g.edges), degree=Fraction(degree))
        return HierarchyVerdict(category=Category.REGULAR, witness=ones)

    perms = _covering_permutations(rows)
    if perms:
        covered = {(i, j) for sigma in perms for i, j in enumerate(sigma)}
        total = all((i, j) in covered for i, row in enumerate(rows) for j in row)
        if total:
            witness = normalize_assignment(_weights_from_permutations(g, perms))
            return HierarchyVerdict(category=Category.POSITIVE, witness=witness)
        witness = normalize_assignment(_weights_from_permutations(g, perms[:1]))
        return HierarchyVerdict(category=Category.NONNEGATIVE, witness=witness)

    solution = _particular_solution(g)
    if solution is not None and g.edge_count > 0:
        witness = normalize_assignment(WeightAssignment(weights=tuple(solution), degree=Fraction(1)))
        return HierarchyVerdict(category=Category.ARBITRARY, witness=witness)
    return HierarchyVerdict(category=Category.NOT_REGULARIZABLE)
