"""
Places a graph in the regularization hierarchy.

    Regular  ⊂  Positive  ⊂  Nonnegative  ⊂  Arbitrary

Decision routes:
  - regular: degree inspection
  - positive: total support of the adjacency matrix (matching.has_total_support)
  - nonnegative: support (matching.has_support)
  - arbitrary: linear-time structure. Undirected graphs need every component
    non-bipartite or balanced bipartite and no isolated node; directed graphs
    need no source or sink and every G* component balanced.
"""

import logging
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from graph_core import Graph, WeightAssignment, normalize_assignment, verify_assignment
from matching import edges_outside_perfect_matchings, has_support, has_total_support
from transform import bipartite_partition, star_component_labels

logger = logging.getLogger(__name__)


# =============================================================================
# CATEGORIES
# =============================================================================
class Category(Enum):
    """Most specific class first."""

    REGULAR = "regular"
    POSITIVE = "positive"
    NONNEGATIVE = "nonnegative"
    ARBITRARY = "arbitrary"
    NOT_REGULARIZABLE = "not_regularizable"

    @property
    def level(self) -> int:
        return list(Category).index(self)

    def is_at_least(self, other: "Category") -> bool:
        """True when this class is `other` or a stronger one."""
        return self.level <= other.level


class CertificateKind(Enum):
    ISOLATED_NODE = "isolated_node"
    SOURCE_NODE = "source_node"
    SINK_NODE = "sink_node"
    UNBALANCED_COMPONENT = "unbalanced_component"


class Certificate(BaseModel):
    """
    Evidence that no nonzero solution with r > 0 exists.

    For an unbalanced component, `whites`/`blacks` hold the two sides: the
    bipartition U/W of an undirected component, or the tails/heads of a G*
    class for a directed one.
    """

    model_config = ConfigDict(frozen=True)

    kind: CertificateKind
    node: Optional[int] = None
    whites: Tuple[int, ...] = ()
    blacks: Tuple[int, ...] = ()
    edges: Tuple[int, ...] = ()
    description: str = ""


class HierarchyVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    category: Category
    witness: Optional[WeightAssignment] = None
    certificate: Optional[Certificate] = None
    blocking_edges: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _regularizable_needs_witness(self) -> "HierarchyVerdict":
        if self.category is not Category.NOT_REGULARIZABLE and self.witness is None:
            raise ValueError(f"a {self.category.value} verdict needs a witness")
        return self


def witness_matches(g: Graph, category: Category, w: WeightAssignment) -> bool:
    """Verifies and has the sign pattern of the category."""
    if category is Category.NOT_REGULARIZABLE or not verify_assignment(g, w):
        return False
    if category is Category.REGULAR:
        return all(weight == 1 for weight in w.weights)
    if category is Category.POSITIVE:
        return w.is_positive
    if category is Category.NONNEGATIVE:
        return w.is_nonnegative
    return True


# =============================================================================
# PREDICATES
# =============================================================================
def is_regular(g: Graph) -> bool:
    out_degree, in_degree = g.degrees()
    first = int(out_degree[0])
    return first > 0 and bool(np.all(out_degree == first)) and bool(np.all(in_degree == first))


def _undirected_certificate(g: Graph) -> Optional[Certificate]:
    degree, _ = g.degrees()
    isolated = np.flatnonzero(degree == 0)
    if len(isolated):
        node = int(isolated[0]) + 1
        return Certificate(
            kind=CertificateKind.ISOLATED_NODE,
            node=node,
            description=f"node {node} is isolated (zero row and column)",
        )
    for component in bipartite_partition(g).components:
        if component.bipartite and not component.balanced:
            return Certificate(
                kind=CertificateKind.UNBALANCED_COMPONENT,
                whites=component.u_part,
                blacks=component.w_part,
                description=(
                    f"bipartite component {list(component.nodes)} is unbalanced: "
                    f"|U|={len(component.u_part)}, |W|={len(component.w_part)}"
                ),
            )
    return None


def _directed_certificate(g: Graph) -> Optional[Certificate]:
    n = g.node_count
    out_degree, in_degree = g.degrees()
    offenders = np.flatnonzero((out_degree == 0) | (in_degree == 0))
    if len(offenders):
        index = int(offenders[0])
        node = index + 1
        if out_degree[index] == 0 and in_degree[index] == 0:
            return Certificate(
                kind=CertificateKind.ISOLATED_NODE,
                node=node,
                description=f"node {node} is isolated (zero row and column)",
            )
        if out_degree[index] == 0:
            return Certificate(
                kind=CertificateKind.SINK_NODE,
                node=node,
                description=f"node {node} is a sink (zero row)",
            )
        return Certificate(
            kind=CertificateKind.SOURCE_NODE,
            node=node,
            description=f"node {node} is a source (zero column)",
        )

    count, labels = star_component_labels(g)
    white_counts = np.bincount(labels[:n], minlength=count)
    black_counts = np.bincount(labels[n:], minlength=count)
    unbalanced = white_counts != black_counts
    if not unbalanced.any():
        return None
    tails, heads = g.endpoint_arrays
    edge_labels = labels[tails]
    first_edge = int(np.flatnonzero(unbalanced[edge_labels])[0])
    members = np.flatnonzero(edge_labels == edge_labels[first_edge])
    whites = tuple((np.unique(tails[members]) + 1).tolist())
    blacks = tuple((np.unique(heads[members]) + 1).tolist())
    return Certificate(
        kind=CertificateKind.UNBALANCED_COMPONENT,
        whites=whites,
        blacks=blacks,
        edges=tuple((members + 1).tolist()),
        description=(
            f"alternating-path class with white nodes {list(whites)} "
            f"and black nodes {list(blacks)} is unbalanced"
        ),
    )


def is_arbitrarily_regularizable(g: Graph) -> Tuple[bool, Optional[Certificate]]:
    certificate = _directed_certificate(g) if g.directed else _undirected_certificate(g)
    if certificate is not None:
        logger.debug("not arbitrarily regularizable: %s", certificate.description)
    return certificate is None, certificate


# =============================================================================
# CLASSIFICATION
# =============================================================================
def classify_graph(g: Graph) -> HierarchyVerdict:
    """
    Most specific category with a normalized witness, or a certificate.
    Checks run strongest first.
    """
    # synth imports this module for its preconditions
    from synth import regular_witness, synth_arbitrary, synth_nonnegative, synth_positive

    if is_regular(g):
        return HierarchyVerdict(category=Category.REGULAR, witness=regular_witness(g))
    if has_total_support(g):
        return HierarchyVerdict(category=Category.POSITIVE, witness=synth_positive(g))
    if has_support(g):
        return HierarchyVerdict(
            category=Category.NONNEGATIVE,
            witness=normalize_assignment(synth_nonnegative(g)),
            blocking_edges=tuple(edges_outside_perfect_matchings(g)),
        )
    regularizable, certificate = is_arbitrarily_regularizable(g)
    if regularizable:
        witness, _ = synth_arbitrary(g)
        return HierarchyVerdict(category=Category.ARBITRARY, witness=witness)
    return HierarchyVerdict(category=Category.NOT_REGULARIZABLE, certificate=certificate)


def predicate_holds(g: Graph, category: Category) -> bool:
    """Whether g belongs to `category` (or a stronger one), without synthesizing."""
    if category is Category.REGULAR:
        return is_regular(g)
    if category is Category.POSITIVE:
        return has_total_support(g)
    if category is Category.NONNEGATIVE:
        return has_support(g)
    if category is Category.ARBITRARY:
        return is_arbitrarily_regularizable(g)[0]
    return True


def category_chain(g: Graph) -> List[Tuple[Category, bool]]:
    """Every predicate of the hierarchy, strongest first."""
    return [(category, predicate_holds(g, category)) for category in list(Category)[:-1]]
