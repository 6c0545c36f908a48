"""
Named example graphs: one per level of the hierarchy for each kind of graph,
plus small graphs with a known kernel or structure.
"""

from fractions import Fraction
from typing import Dict, Sequence, Tuple

from classify import Category
from graph_core import Graph, WeightAssignment


def undirected(n: int, edges: Sequence[Tuple[int, int]]) -> Graph:
    return Graph(directed=False, node_count=n, edges=tuple(edges))


def directed(n: int, edges: Sequence[Tuple[int, int]]) -> Graph:
    return Graph(directed=True, node_count=n, edges=tuple(edges))


# =============================================================================
# UNDIRECTED
# =============================================================================
# K_{1,3}: bipartite with parts of size 1 and 3
STAR = undirected(4, [(1, 2), (1, 3), (1, 4)])

# Two hubs 1 and 4 joined by a bridge, two leaves each; parts {1,5,6} / {2,3,4}
DOUBLE_STAR = undirected(6, [(1, 2), (1, 3), (1, 4), (4, 5), (4, 6)])

# Perfect matching {1,2},{3,4} plus two chords from node 1
MATCHING_WITH_CHORDS = undirected(4, [(1, 2), (3, 4), (1, 3), (1, 4)])

# Wheel on five nodes: rim 1-2-3-4-1, hub 5
WHEEL = undirected(5, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (2, 5), (3, 5), (4, 5)])

CHAIR = undirected(5, [(1, 2), (2, 3), (3, 4), (4, 1), (5, 1)])
TRIANGLE = undirected(3, [(1, 2), (2, 3), (3, 1)])
SQUARE = undirected(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
PATH4 = undirected(4, [(1, 2), (2, 3), (3, 4)])
K2 = undirected(2, [(1, 2)])
K4 = undirected(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])

# =============================================================================
# DIRECTED
# =============================================================================
# Two alternating-path classes, the first with whites {1,2,4} and blacks {2,3}
UNBALANCED_CLASSES = directed(4, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 2), (4, 3)])

# Pattern [1 1 1; 0 0 1; 0 0 1]: chainable, no spanning cycle forest
UPPER_PATTERN = directed(3, [(1, 1), (1, 2), (1, 3), (2, 3), (3, 3)])

# 3-cycle, loop at 4 and the 2-cycle 3<->4
CYCLE_LOOP_TWO_CYCLE = directed(4, [(1, 2), (2, 3), (3, 1), (4, 4), (3, 4), (4, 3)])

# As above plus the 2-cycle 1<->2
CYCLE_LOOP_TWO_TWO_CYCLES = directed(4, [(1, 2), (2, 3), (3, 1), (4, 4), (2, 1), (3, 4), (4, 3)])

CYCLE3 = directed(3, [(1, 2), (2, 3), (3, 1)])
TWO_CYCLE = directed(2, [(1, 2), (2, 1)])
LOOP = directed(1, [(1, 1)])

# =============================================================================
# HIERARCHY EXAMPLES
# =============================================================================
# One graph strictly inside each level, weakest first
UNDIRECTED_LADDER: Dict[Category, Graph] = {
    Category.NOT_REGULARIZABLE: STAR,
    Category.ARBITRARY: DOUBLE_STAR,
    Category.NONNEGATIVE: MATCHING_WITH_CHORDS,
    Category.POSITIVE: WHEEL,
}

DIRECTED_LADDER: Dict[Category, Graph] = {
    Category.NOT_REGULARIZABLE: UNBALANCED_CLASSES,
    Category.ARBITRARY: UPPER_PATTERN,
    Category.NONNEGATIVE: CYCLE_LOOP_TWO_CYCLE,
    Category.POSITIVE: CYCLE_LOOP_TWO_TWO_CYCLES,
}


def _assignment(weights: Sequence[int], degree: int) -> WeightAssignment:
    return WeightAssignment(weights=tuple(Fraction(w) for w in weights), degree=Fraction(degree))


# Hand-made weight vectors with their stated degree
DOUBLE_STAR_WEIGHTS = _assignment([1, 1, -1, 1, 1], 1)
UPPER_PATTERN_WEIGHTS = _assignment([1, 1, -1, 1, 1], 1)
WHEEL_WEIGHTS = _assignment([3, 3, 3, 3, 2, 2, 2, 2], 8)
PATH4_WEIGHTS = _assignment([1, 0, 1], 1)
CHAIR_KERNEL = _assignment([1, -1, 1, -1, 0], 0)
