import unittest

import numpy as np

import fixtures
from classify import (
    Category,
    CertificateKind,
    HierarchyVerdict,
    category_chain,
    classify_graph,
    is_arbitrarily_regularizable,
    is_regular,
    witness_matches,
)
from graph_core import Graph, WeightAssignment, verify_assignment


def disjoint_union(first: Graph, second: Graph) -> Graph:
    shift = first.node_count
    edges = first.edges + tuple((tail + shift, head + shift) for tail, head in second.edges)
    return Graph(directed=first.directed, node_count=shift + second.node_count, edges=edges)


def random_graph(rng: np.random.Generator, n: int, directed: bool) -> Graph:
    pattern = rng.random((n, n)) < float(rng.uniform(0.15, 0.6))
    if not directed:
        pattern = np.triu(pattern)
        pattern = pattern | pattern.T
    return Graph.from_matrix(pattern.astype(int), directed=directed)


class TestCategory(unittest.TestCase):
    def test_levels(self):
        self.assertTrue(Category.REGULAR.is_at_least(Category.ARBITRARY))
        self.assertTrue(Category.NONNEGATIVE.is_at_least(Category.NONNEGATIVE))
        self.assertFalse(Category.ARBITRARY.is_at_least(Category.POSITIVE))
        self.assertEqual(Category.NOT_REGULARIZABLE.level, 4)

    def test_verdict_needs_witness(self):
        with self.assertRaises(ValueError):
            HierarchyVerdict(category=Category.POSITIVE)


class TestLadders(unittest.TestCase):
    def test_undirected_ladder(self):
        for expected, g in fixtures.UNDIRECTED_LADDER.items():
            self.assertEqual(classify_graph(g).category, expected, g.edges)

    def test_directed_ladder(self):
        for expected, g in fixtures.DIRECTED_LADDER.items():
            self.assertEqual(classify_graph(g).category, expected, g.edges)

    def test_regular_graphs(self):
        for g in (fixtures.TRIANGLE, fixtures.SQUARE, fixtures.K2, fixtures.K4, fixtures.CYCLE3, fixtures.LOOP):
            verdict = classify_graph(g)
            self.assertEqual(verdict.category, Category.REGULAR)
            self.assertTrue(all(w == 1 for w in verdict.witness.weights))
        self.assertEqual(classify_graph(fixtures.K4).witness.degree, 3)

    def test_is_regular(self):
        self.assertTrue(is_regular(fixtures.TWO_CYCLE))
        self.assertFalse(is_regular(fixtures.WHEEL))
        self.assertFalse(is_regular(fixtures.directed(2, [])))

    def test_witnesses_match_their_category(self):
        graphs = list(fixtures.UNDIRECTED_LADDER.values()) + list(fixtures.DIRECTED_LADDER.values())
        for g in graphs:
            verdict = classify_graph(g)
            if verdict.category is Category.NOT_REGULARIZABLE:
                self.assertIsNone(verdict.witness)
                continue
            self.assertTrue(witness_matches(g, verdict.category, verdict.witness), g.edges)
            self.assertTrue(verdict.witness.is_integral)

    def test_regular_witness_is_all_ones(self):
        ones = WeightAssignment(weights=(1,) * 6, degree=3)
        twos = WeightAssignment(weights=(2,) * 6, degree=6)
        self.assertTrue(witness_matches(fixtures.K4, Category.REGULAR, ones))
        self.assertTrue(verify_assignment(fixtures.K4, twos))
        self.assertFalse(witness_matches(fixtures.K4, Category.REGULAR, twos))
        self.assertTrue(witness_matches(fixtures.K4, Category.POSITIVE, twos))

    def test_nonnegative_verdict_lists_blocking_edges(self):
        verdict = classify_graph(fixtures.MATCHING_WITH_CHORDS)
        self.assertEqual(verdict.blocking_edges, (3, 4))
        self.assertEqual(verdict.witness.weights, (1, 1, 0, 0))
        self.assertEqual(verdict.witness.degree, 1)
        self.assertEqual(classify_graph(fixtures.CYCLE_LOOP_TWO_CYCLE).blocking_edges, (5, 6))

    def test_category_chain(self):
        self.assertEqual(
            category_chain(fixtures.MATCHING_WITH_CHORDS),
            [
                (Category.REGULAR, False),
                (Category.POSITIVE, False),
                (Category.NONNEGATIVE, True),
                (Category.ARBITRARY, True),
            ],
        )


class TestCertificates(unittest.TestCase):
    def test_unbalanced_star(self):
        verdict = classify_graph(fixtures.STAR)
        certificate = verdict.certificate
        self.assertEqual(certificate.kind, CertificateKind.UNBALANCED_COMPONENT)
        self.assertEqual(certificate.whites, (1,))
        self.assertEqual(certificate.blacks, (2, 3, 4))

    def test_unbalanced_edge_class(self):
        _, certificate = is_arbitrarily_regularizable(fixtures.UNBALANCED_CLASSES)
        self.assertEqual(certificate.kind, CertificateKind.UNBALANCED_COMPONENT)
        self.assertEqual(certificate.edges, (1, 2, 5, 6))
        self.assertEqual(certificate.whites, (1, 2, 4))
        self.assertEqual(certificate.blacks, (2, 3))

    def test_isolated_nodes(self):
        _, certificate = is_arbitrarily_regularizable(fixtures.undirected(3, [(1, 2)]))
        self.assertEqual(certificate.kind, CertificateKind.ISOLATED_NODE)
        self.assertEqual(certificate.node, 3)
        _, certificate = is_arbitrarily_regularizable(fixtures.directed(3, [(1, 2), (2, 1)]))
        self.assertEqual(certificate.kind, CertificateKind.ISOLATED_NODE)
        self.assertEqual(certificate.node, 3)

    def test_source_and_sink(self):
        _, certificate = is_arbitrarily_regularizable(fixtures.directed(2, [(1, 2)]))
        self.assertEqual(certificate.kind, CertificateKind.SOURCE_NODE)
        self.assertEqual(certificate.node, 1)
        _, certificate = is_arbitrarily_regularizable(fixtures.directed(2, [(1, 1), (1, 2)]))
        self.assertEqual(certificate.kind, CertificateKind.SINK_NODE)
        self.assertEqual(certificate.node, 2)

    def test_regularizable_graph_has_no_certificate(self):
        self.assertEqual(is_arbitrarily_regularizable(fixtures.DOUBLE_STAR), (True, None))
        self.assertEqual(is_arbitrarily_regularizable(fixtures.UPPER_PATTERN), (True, None))


class TestStructure(unittest.TestCase):
    def test_disjoint_unions_take_the_weaker_class(self):
        cases = [
            (fixtures.TRIANGLE, fixtures.WHEEL, Category.POSITIVE),
            (fixtures.STAR, fixtures.TRIANGLE, Category.NOT_REGULARIZABLE),
            (fixtures.DOUBLE_STAR, fixtures.TRIANGLE, Category.ARBITRARY),
            (fixtures.PATH4, fixtures.WHEEL, Category.NONNEGATIVE),
        ]
        for first, second, expected in cases:
            g = disjoint_union(first, second)
            verdict = classify_graph(g)
            self.assertEqual(verdict.category, expected)
            if verdict.witness is not None:
                self.assertTrue(verify_assignment(g, verdict.witness))

    def test_reversal_keeps_the_class(self):
        rng = np.random.default_rng(17)
        for g in fixtures.DIRECTED_LADDER.values():
            self.assertEqual(classify_graph(g.reverse()).category, classify_graph(g).category)
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(1, 7)), directed=True)
            self.assertEqual(classify_graph(g.reverse()).category, classify_graph(g).category, g.edges)

    def test_predicates_are_nested(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            directed = bool(rng.integers(0, 2))
            g = random_graph(rng, int(rng.integers(1, 8)), directed)
            holds = [value for _, value in category_chain(g)]
            for stronger, weaker in zip(holds, holds[1:]):
                self.assertTrue(weaker or not stronger, g.edges)
            verdict = classify_graph(g)
            if verdict.category is Category.NOT_REGULARIZABLE:
                self.assertFalse(any(holds))
                self.assertIsNotNone(verdict.certificate)
            else:
                self.assertTrue(witness_matches(g, verdict.category, verdict.witness), g.edges)
                self.assertEqual(holds.index(True), verdict.category.level)


if __name__ == '__main__':
    unittest.main()
