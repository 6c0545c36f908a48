"""
Bipartite matching on G* and the matching tests of nonnegative and positive
regularizability.

  support        <=> G* has a perfect matching
  total support  <=> every star edge lies on some perfect matching

Maximum matchings come from scipy's Hopcroft-Karp. Total support is checked
edge by edge: drop the pair (i, M[i]) and the pair holding black j, then look
for one augmenting path between the two freed nodes that avoids i₁ and j₂.
"""

import logging
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.sparse.csgraph import maximum_bipartite_matching

from errors import NotPerfect
from graph_core import Graph
from transform import StarGraph, star_transform

logger = logging.getLogger(__name__)


# =============================================================================
# TYPES
# =============================================================================
class Matching(BaseModel):
    """1-based star edge indices, ascending."""

    model_config = ConfigDict(frozen=True)

    edges: Tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.edges)

    def is_perfect(self, sg: StarGraph) -> bool:
        return self.size == sg.side_size


class CycleForest(BaseModel):
    """
    Source edges of a spanning cycle forest with their multiplicity.

    Directed forests carry multiplicity 1 on every edge (a permutation).
    Undirected forests are the pattern of Q = P + Pᵀ: 2 on a doubled single
    edge or a loop, 1 on the edges of longer cycles.
    """

    model_config = ConfigDict(frozen=True)

    edges: Tuple[int, ...] = ()
    multiplicity: Tuple[int, ...] = ()

    def as_weights(self, edge_count: int) -> List[int]:
        weights = [0] * edge_count
        for edge, times in zip(self.edges, self.multiplicity):
            weights[edge - 1] = times
        return weights


# =============================================================================
# MAXIMUM MATCHING
# =============================================================================
def _match_arrays(sg: StarGraph) -> Tuple[List[int], List[int]]:
    """(white -> black, black -> white), 0-based, -1 when unmatched."""
    n = sg.side_size
    if sg.edge_count == 0:
        return [-1] * n, [-1] * n
    biadjacency = sg.biadjacency()
    match_row = maximum_bipartite_matching(biadjacency, perm_type="column")
    match_col = [-1] * n
    for white, black in enumerate(match_row.tolist()):
        if black >= 0:
            match_col[black] = white
    return match_row.tolist(), match_col


def _edge_lookup(sg: StarGraph) -> Dict[Tuple[int, int], int]:
    return {(white - 1, black - 1): index for index, (white, black) in enumerate(sg.star_edges, start=1)}


def _matching_from_arrays(sg: StarGraph, match_row: List[int]) -> Matching:
    lookup = _edge_lookup(sg)
    edges = sorted(lookup[(white, black)] for white, black in enumerate(match_row) if black >= 0)
    return Matching(edges=tuple(edges))


def max_matching(sg: StarGraph) -> Matching:
    match_row, _ = _match_arrays(sg)
    matching = _matching_from_arrays(sg, match_row)
    logger.debug("maximum matching %d of %d", matching.size, sg.side_size)
    return matching


def has_support(g: Graph) -> bool:
    """G* has a perfect matching (undirected graphs through their symmetric matrix)."""
    sg = star_transform(g)
    whites, blacks = sg.endpoint_arrays()
    n = sg.side_size
    # A zero row or column settles it before Hopcroft-Karp runs
    if np.bincount(whites, minlength=n).min() == 0 or np.bincount(blacks, minlength=n).min() == 0:
        return False
    match_row, _ = _match_arrays(sg)
    return all(black >= 0 for black in match_row)


# =============================================================================
# WARM-START REPAIR
# =============================================================================
def _adjacency_lists(sg: StarGraph) -> List[List[int]]:
    biadjacency = sg.biadjacency()
    indptr = biadjacency.indptr.tolist()
    indices = biadjacency.indices.tolist()
    return [indices[indptr[w]:indptr[w + 1]] for w in range(sg.side_size)]


def _alternating_path(
    adjacency: List[List[int]],
    match_row: List[int],
    match_col: List[int],
    white: int,
    black: int,
) -> Optional[Dict[int, int]]:
    """
    BFS for an alternating path from white k = M⁻¹[black] to black t = M[white]
    in G* without white₁ and black₂. Returns black -> previous white on the
    path, or None when no such path exists.
    """
    start = match_col[black]
    target = match_row[white]
    parent: Dict[int, int] = {}
    frontier = [start]
    seen_whites = {start}
    while frontier:
        next_frontier = []
        for w in frontier:
            for b in adjacency[w]:
                if b == black or b in parent:
                    continue
                parent[b] = w
                if b == target:
                    return parent
                partner = match_col[b]
                if partner not in seen_whites:
                    seen_whites.add(partner)
                    next_frontier.append(partner)
        frontier = next_frontier
    return None


def _repaired(
    match_row: List[int],
    match_col: List[int],
    parent: Dict[int, int],
    white: int,
    black: int,
) -> List[int]:
    rows = list(match_row)
    cols = list(match_col)
    start = match_col[black]
    b = match_row[white]
    while True:
        w = parent[b]
        previous = rows[w]
        rows[w] = b
        cols[b] = w
        if w == start:
            break
        b = previous
    rows[white] = black
    cols[black] = white
    return rows


def perfect_matching_through(sg: StarGraph, matching: Matching, star_edge: int) -> Optional[Matching]:
    """A perfect matching containing the given star edge, repaired from `matching`."""
    if not matching.is_perfect(sg):
        raise NotPerfect(f"matching of size {matching.size} on {sg.side_size} white nodes")
    if star_edge in matching.edges:
        return matching
    n = sg.side_size
    match_row = [-1] * n
    match_col = [-1] * n
    for index in matching.edges:
        w, b = sg.star_edges[index - 1]
        match_row[w - 1] = b - 1
        match_col[b - 1] = w - 1
    white, black = (x - 1 for x in sg.star_edges[star_edge - 1])
    parent = _alternating_path(_adjacency_lists(sg), match_row, match_col, white, black)
    if parent is None:
        return None
    return _matching_from_arrays(sg, _repaired(match_row, match_col, parent, white, black))


def _uncovered_star_edges(sg: StarGraph) -> Iterator[int]:
    """Star edges outside every perfect matching; all edges when none is perfect."""
    match_row, match_col = _match_arrays(sg)
    if any(black < 0 for black in match_row):
        yield from range(1, sg.edge_count + 1)
        return
    adjacency = _adjacency_lists(sg)
    for index, (w, b) in enumerate(sg.star_edges, start=1):
        white, black = w - 1, b - 1
        if match_row[white] == black:
            continue
        if _alternating_path(adjacency, match_row, match_col, white, black) is None:
            yield index


def has_total_support(g: Graph) -> bool:
    if g.edge_count == 0:
        return False
    sg = star_transform(g)
    for star_edge in _uncovered_star_edges(sg):
        logger.debug("star edge %d lies on no perfect matching", star_edge)
        return False
    return True


def edges_outside_perfect_matchings(g: Graph) -> List[int]:
    """Source edges contained in no spanning cycle forest, ascending."""
    sg = star_transform(g)
    return sorted({sg.source_edge[star_edge - 1] for star_edge in _uncovered_star_edges(sg)})


def covering_matchings(g: Graph) -> List[Matching]:
    """
    One perfect matching through each source edge, in edge order (for an
    undirected edge, through its first twin). Raises NotPerfect when some
    edge lies on no perfect matching.
    """
    sg = star_transform(g)
    base = max_matching(sg)
    if not base.is_perfect(sg):
        raise NotPerfect("G* has no perfect matching")
    first_star_edge: Dict[int, int] = {}
    for star_edge, source in enumerate(sg.source_edge, start=1):
        first_star_edge.setdefault(source, star_edge)
    matchings = []
    for source in range(1, g.edge_count + 1):
        through = perfect_matching_through(sg, base, first_star_edge[source])
        if through is None:
            raise NotPerfect(f"edge {source} lies on no perfect matching")
        matchings.append(through)
    return matchings


# =============================================================================
# CYCLE FORESTS
# =============================================================================
def matching_to_cycle_forest(sg: StarGraph, matching: Matching) -> CycleForest:
    if not matching.is_perfect(sg):
        raise NotPerfect(f"matching of size {matching.size} is not perfect on {sg.side_size} nodes")
    counts: Dict[int, int] = {}
    for star_edge in matching.edges:
        source = sg.source_edge[star_edge - 1]
        counts[source] = counts.get(source, 0) + 1
    if not sg.base.directed:
        # Q = P + Pᵀ puts 2·p_aa on the diagonal
        for source in counts:
            tail, head = sg.base.edges[source - 1]
            if tail == head:
                counts[source] = 2
    edges = tuple(sorted(counts))
    return CycleForest(edges=edges, multiplicity=tuple(counts[e] for e in edges))
