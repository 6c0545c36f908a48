"""
Structural transforms: the bipartite counterpart G* of a directed graph,
connected components and 2-colourings of undirected graphs, alternating-path
edge classes, chainability and the block-diagonal canonical form.

G* has one white node x₁ (out side) and one black node x₂ (in side) per
source node; the directed edge (x, y) becomes {x₁, y₂}. Edge classes of the
alternating-path relation are computed as the edge sets of G* components,
never by walking alternating paths.
"""

import logging
from collections import deque
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict
from scipy.sparse.csgraph import connected_components as _csgraph_components

import config
from errors import GraphKindError, InconsistentResult, ZeroRowOrColumn
from graph_core import Graph

logger = logging.getLogger(__name__)


# =============================================================================
# STAR GRAPH  (G*)
# =============================================================================
class StarGraph(BaseModel):
    """
    What: The bipartite counterpart G* of a graph
    star_edges[k] = (white node, black node) in source numbering; the star
    edge is {white₁, black₂}. source_edge[k] is the 1-based source edge it
    came from. For an undirected source each non-loop edge yields two star
    edges recorded in `twins`.
    """

    model_config = ConfigDict(frozen=True)

    base: Graph
    star_edges: Tuple[Tuple[int, int], ...]
    source_edge: Tuple[int, ...]
    twins: Tuple[Tuple[int, int], ...] = ()

    @property
    def side_size(self) -> int:
        return self.base.node_count

    @property
    def node_count(self) -> int:
        return 2 * self.base.node_count

    @property
    def edge_count(self) -> int:
        return len(self.star_edges)

    def endpoint_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """0-based (white, black) arrays."""
        if not self.star_edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        pairs = np.asarray(self.star_edges, dtype=np.int64) - 1
        return pairs[:, 0].copy(), pairs[:, 1].copy()

    def biadjacency(self) -> sp.csr_matrix:
        """White × black matrix whose entry holds star edge index + 1."""
        whites, blacks = self.endpoint_arrays()
        n = self.side_size
        data = np.arange(1, len(whites) + 1, dtype=np.int64)
        matrix = sp.csr_matrix((data, (whites, blacks)), shape=(n, n))
        matrix.sort_indices()
        return matrix

    def white_degrees(self) -> np.ndarray:
        return np.bincount(self.endpoint_arrays()[0], minlength=self.side_size)

    def black_degrees(self) -> np.ndarray:
        return np.bincount(self.endpoint_arrays()[1], minlength=self.side_size)


def star_transform(g: Graph) -> StarGraph:
    if g.directed:
        return StarGraph(
            base=g,
            star_edges=g.edges,
            source_edge=tuple(range(1, g.edge_count + 1)),
        )
    star_edges: List[Tuple[int, int]] = []
    source_edge: List[int] = []
    twins: List[Tuple[int, int]] = []
    for index, (tail, head) in enumerate(g.edges, start=1):
        star_edges.append((tail, head))
        source_edge.append(index)
        if tail != head:
            star_edges.append((head, tail))
            source_edge.append(index)
            twins.append((len(star_edges) - 1, len(star_edges)))
    return StarGraph(
        base=g,
        star_edges=tuple(star_edges),
        source_edge=tuple(source_edge),
        twins=tuple(twins),
    )


def _bipartite_labels(
    row_count: int, col_count: int, rows: np.ndarray, cols: np.ndarray
) -> Tuple[int, np.ndarray]:
    """Components of the bipartite graph on rows ∪ cols (0-based), one edge per (row, col) pair."""
    size = row_count + col_count
    data = np.ones(len(rows), dtype=np.int8)
    adjacency = sp.csr_matrix((data, (rows, cols + row_count)), shape=(size, size))
    return _csgraph_components(adjacency, directed=False)


def star_component_labels(g: Graph) -> Tuple[int, np.ndarray]:
    """Component count and labels of the 2n star nodes of a directed graph (whites first)."""
    if not g.directed:
        raise GraphKindError("star_component_labels expects a directed graph")
    tails, heads = g.endpoint_arrays
    return _bipartite_labels(g.node_count, g.node_count, tails, heads)


# =============================================================================
# UNDIRECTED COMPONENTS AND 2-COLOURINGS
# =============================================================================
def _require_undirected(g: Graph, operation: str) -> None:
    if g.directed:
        raise GraphKindError(f"{operation} expects an undirected graph")


def connected_components(g: Graph) -> List[Tuple[int, ...]]:
    """Node sets of the connected components, sorted, ordered by smallest node."""
    _require_undirected(g, "connected_components")
    count, labels = _csgraph_components(g.sparse_adjacency, directed=False)
    groups: Dict[int, List[int]] = {}
    for node, label in enumerate(labels.tolist(), start=1):
        groups.setdefault(label, []).append(node)
    components = [tuple(nodes) for nodes in groups.values()]
    components.sort(key=lambda nodes: nodes[0])
    logger.debug("%d connected components on %d nodes", count, g.node_count)
    return components


class ComponentColouring(BaseModel):
    """One component: a 2-colouring (U, W) or an odd closed walk."""

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[int, ...]
    bipartite: bool
    u_part: Tuple[int, ...] = ()
    w_part: Tuple[int, ...] = ()
    odd_cycle: Tuple[int, ...] = ()

    @property
    def balanced(self) -> bool:
        return self.bipartite and len(self.u_part) == len(self.w_part)


class BipartitePartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    components: Tuple[ComponentColouring, ...]

    @property
    def is_bipartite(self) -> bool:
        return all(c.bipartite for c in self.components)


def _path_to_root(node: int, parent: List[int]) -> List[int]:
    path = [node]
    while parent[node] != node:
        node = parent[node]
        path.append(node)
    return path


def _odd_walk(u: int, v: int, parent: List[int]) -> Tuple[int, ...]:
    """u → lca → v along BFS-tree paths; the closing edge {v, u} makes the walk odd."""
    if u == v:
        return (u + 1,)
    up = _path_to_root(u, parent)
    vp = _path_to_root(v, parent)
    on_v = set(vp)
    lca = next(x for x in up if x in on_v)
    first = up[: up.index(lca) + 1]
    second = list(reversed(vp[: vp.index(lca)]))
    return tuple(x + 1 for x in first + second)


def bipartite_partition(g: Graph) -> BipartitePartition:
    """
    BFS from the smallest unvisited node, smallest neighbour first. The root
    of each component is coloured U. A component with a loop or a
    same-colour edge gets the first odd closed walk found.
    """
    _require_undirected(g, "bipartite_partition")
    n = g.node_count
    adjacency = g.sparse_adjacency
    indptr = adjacency.indptr.tolist()
    indices = adjacency.indices.tolist()
    colour = [-1] * n
    parent = list(range(n))
    components: List[ComponentColouring] = []

    for root in range(n):
        if colour[root] != -1:
            continue
        colour[root] = 0
        members = [root]
        odd: Optional[Tuple[int, ...]] = None
        queue = deque([root])
        while queue:
            node = queue.popleft()
            for neighbour in indices[indptr[node]:indptr[node + 1]]:
                if colour[neighbour] == -1:
                    colour[neighbour] = 1 - colour[node]
                    parent[neighbour] = node
                    members.append(neighbour)
                    queue.append(neighbour)
                elif colour[neighbour] == colour[node] and odd is None:
                    odd = _odd_walk(node, neighbour, parent)
        members.sort()
        nodes = tuple(x + 1 for x in members)
        if odd is None:
            components.append(
                ComponentColouring(
                    nodes=nodes,
                    bipartite=True,
                    u_part=tuple(x + 1 for x in members if colour[x] == 0),
                    w_part=tuple(x + 1 for x in members if colour[x] == 1),
                )
            )
        else:
            components.append(ComponentColouring(nodes=nodes, bipartite=False, odd_cycle=odd))
    return BipartitePartition(components=tuple(components))


# =============================================================================
# ALTERNATING-PATH EDGE CLASSES
# =============================================================================
class EdgeClass(BaseModel):
    """Edges of one G* component with its white (tail) and black (head) nodes."""

    model_config = ConfigDict(frozen=True)

    edges: Tuple[int, ...]
    whites: Tuple[int, ...]
    blacks: Tuple[int, ...]

    @property
    def balanced(self) -> bool:
        return len(self.whites) == len(self.blacks)


class EdgeClassPartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    classes: Tuple[EdgeClass, ...]

    def class_of(self, edge: int) -> int:
        """0-based position of the class holding a 1-based edge index."""
        for position, edge_class in enumerate(self.classes):
            if edge in edge_class.edges:
                return position
        raise KeyError(edge)


def _group_edges(labels: np.ndarray) -> List[np.ndarray]:
    """Edge positions grouped by label, ascending inside a group, groups by first member."""
    if len(labels) == 0:
        return []
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    groups = np.split(order, splits)
    groups.sort(key=lambda group: int(group[0]))
    return groups


def _classes_from_pairs(tails: np.ndarray, heads: np.ndarray, row_count: int, col_count: int) -> List[EdgeClass]:
    _, labels = _bipartite_labels(row_count, col_count, tails, heads)
    classes = []
    for group in _group_edges(labels[tails]):
        classes.append(
            EdgeClass(
                edges=tuple((group + 1).tolist()),
                whites=tuple((np.unique(tails[group]) + 1).tolist()),
                blacks=tuple((np.unique(heads[group]) + 1).tolist()),
            )
        )
    return classes


def edge_classes(g: Graph) -> EdgeClassPartition:
    if not g.directed:
        raise GraphKindError("edge_classes expects a directed graph; use symmetric_digraph() first")
    tails, heads = g.endpoint_arrays
    classes = _classes_from_pairs(tails, heads, g.node_count, g.node_count)
    logger.debug("%d alternating-path classes over %d edges", len(classes), g.edge_count)
    return EdgeClassPartition(classes=tuple(classes))


# =============================================================================
# CHAINABILITY
# =============================================================================
def _pattern_pairs(pattern: Any) -> Tuple[np.ndarray, np.ndarray, int, int]:
    matrix = np.asarray(pattern) != 0
    if matrix.ndim != 2:
        raise ValueError("pattern must be a 2-D 0/1 matrix")
    rows, cols = np.nonzero(matrix)
    return rows.astype(np.int64), cols.astype(np.int64), matrix.shape[0], matrix.shape[1]


def _first_zero_line(
    rows: np.ndarray, cols: np.ndarray, row_count: int, col_count: int
) -> Optional[Tuple[int, str]]:
    row_hits = np.bincount(rows, minlength=row_count)
    col_hits = np.bincount(cols, minlength=col_count)
    for index in range(max(row_count, col_count)):
        if index < row_count and row_hits[index] == 0:
            return index + 1, "row"
        if index < col_count and col_hits[index] == 0:
            return index + 1, "column"
    return None


def rook_move_chainable(pattern: Any) -> bool:
    """Direct closure of rook moves over the nonzero entries."""
    rows, cols, row_count, col_count = _pattern_pairs(pattern)
    if row_count == 0 or col_count == 0 or len(rows) == 0:
        return False
    if _first_zero_line(rows, cols, row_count, col_count) is not None:
        return False
    entries = list(zip(rows.tolist(), cols.tolist()))
    reached = {entries[0]}
    frontier = [entries[0]]
    while frontier:
        row, col = frontier.pop()
        for entry in entries:
            if entry not in reached and (entry[0] == row or entry[1] == col):
                reached.add(entry)
                frontier.append(entry)
    return len(reached) == len(entries)


def is_chainable_matrix(pattern: Any) -> bool:
    """No zero rows or columns and a connected G* (rows white, columns black)."""
    rows, cols, row_count, col_count = _pattern_pairs(pattern)
    if row_count == 0 or col_count == 0:
        return False
    if _first_zero_line(rows, cols, row_count, col_count) is not None:
        return False
    count, _ = _bipartite_labels(row_count, col_count, rows, cols)
    return count == 1


def is_chainable(g: Graph, cross_check: Optional[bool] = None) -> bool:
    """
    Chainability of the adjacency matrix; an undirected graph is read through
    its symmetric matrix. With cross_check (default: m within the rook-check
    cap) the answer is compared against the direct rook-move closure.
    """
    digraph = g.symmetric_digraph()
    n = digraph.node_count
    tails, heads = digraph.endpoint_arrays
    if _first_zero_line(tails, heads, n, n) is not None:
        answer = False
    else:
        count, _ = _bipartite_labels(n, n, tails, heads)
        answer = count == 1
    if cross_check is None:
        cross_check = digraph.edge_count <= config.ROOK_CHECK_MAX_EDGES
    if cross_check:
        closure = rook_move_chainable(digraph.adjacency_matrix())
        if closure != answer:
            raise InconsistentResult(
                f"chainability disagrees with rook-move closure ({answer} vs {closure})"
            )
    return answer


# =============================================================================
# CANONICAL BLOCK FORM
# =============================================================================
class CanonicalForm(BaseModel):
    """
    What: Row and column permutations making the matrix block diagonal
    row_perm[i] is the original (1-based) row placed at position i; blocks
    list (row_count, col_count) in diagonal order.
    """

    model_config = ConfigDict(frozen=True)

    row_perm: Tuple[int, ...]
    col_perm: Tuple[int, ...]
    blocks: Tuple[Tuple[int, int], ...]

    @property
    def all_square(self) -> bool:
        return all(rows == cols for rows, cols in self.blocks)

    def apply(self, pattern: Any) -> np.ndarray:
        matrix = np.asarray(pattern)
        rows = np.asarray(self.row_perm) - 1
        cols = np.asarray(self.col_perm) - 1
        return matrix[np.ix_(rows, cols)]

    def block_offsets(self) -> List[Tuple[slice, slice]]:
        slices = []
        row_start = col_start = 0
        for rows, cols in self.blocks:
            slices.append((slice(row_start, row_start + rows), slice(col_start, col_start + cols)))
            row_start += rows
            col_start += cols
        return slices


def _canonical_from_pairs(rows: np.ndarray, cols: np.ndarray, row_count: int, col_count: int) -> CanonicalForm:
    zero = _first_zero_line(rows, cols, row_count, col_count)
    if zero is not None:
        raise ZeroRowOrColumn(*zero)
    row_perm: List[int] = []
    col_perm: List[int] = []
    blocks: List[Tuple[int, int]] = []
    classes = _classes_from_pairs(rows, cols, row_count, col_count)
    classes.sort(key=lambda edge_class: edge_class.whites[0])
    for edge_class in classes:
        row_perm.extend(edge_class.whites)
        col_perm.extend(edge_class.blacks)
        blocks.append((len(edge_class.whites), len(edge_class.blacks)))
    return CanonicalForm(row_perm=tuple(row_perm), col_perm=tuple(col_perm), blocks=tuple(blocks))


def canonical_form(g: Graph) -> CanonicalForm:
    digraph = g.symmetric_digraph()
    tails, heads = digraph.endpoint_arrays
    form = _canonical_from_pairs(tails, heads, digraph.node_count, digraph.node_count)
    logger.debug("canonical form with blocks %s", form.blocks)
    return form


def canonical_form_matrix(pattern: Any) -> CanonicalForm:
    rows, cols, row_count, col_count = _pattern_pairs(pattern)
    return _canonical_from_pairs(rows, cols, row_count, col_count)
