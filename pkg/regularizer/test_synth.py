import unittest
from fractions import Fraction

import numpy as np

import fixtures
from errors import (
    AcyclicOnlyTrivial,
    InconsistentResult,
    NoSupport,
    NoTotalSupport,
    NotArbitrarilyRegularizable,
)
from graph_core import Graph, build_incidence, verify_assignment
from synth import (
    kernel_witness,
    regular_witness,
    synth_arbitrary,
    synth_nonnegative,
    synth_positive,
)


class TestRegularAndPositive(unittest.TestCase):
    def test_regular_witness(self):
        w = regular_witness(fixtures.K4)
        self.assertEqual(w.weights, (1,) * 6)
        self.assertEqual(w.degree, 3)
        with self.assertRaises(InconsistentResult):
            regular_witness(fixtures.WHEEL)

    def test_cycle_positive(self):
        w = synth_positive(fixtures.CYCLE3)
        self.assertEqual(w.weights, (1, 1, 1))
        self.assertEqual(w.degree, 1)

    def test_positive_witnesses(self):
        for g in (fixtures.WHEEL, fixtures.CYCLE_LOOP_TWO_TWO_CYCLES, fixtures.TRIANGLE):
            w = synth_positive(g)
            self.assertTrue(verify_assignment(g, w))
            self.assertTrue(w.is_positive)
            self.assertTrue(w.is_integral)

    def test_positive_needs_total_support(self):
        with self.assertRaises(NoTotalSupport):
            synth_positive(fixtures.MATCHING_WITH_CHORDS)


class TestNonnegative(unittest.TestCase):
    def test_path_uses_doubled_edges(self):
        w = synth_nonnegative(fixtures.PATH4)
        self.assertEqual(w.weights, (2, 0, 2))
        self.assertEqual(w.degree, 2)

    def test_directed_forest(self):
        w = synth_nonnegative(fixtures.CYCLE_LOOP_TWO_CYCLE)
        self.assertEqual(w.weights, (1, 1, 1, 1, 0, 0))
        self.assertEqual(w.degree, 1)

    def test_needs_support(self):
        with self.assertRaises(NoSupport):
            synth_nonnegative(fixtures.UPPER_PATTERN)


class TestArbitrary(unittest.TestCase):
    def test_double_star(self):
        w, report = synth_arbitrary(fixtures.DOUBLE_STAR)
        self.assertEqual(w.weights, (1, 1, -1, 1, 1))
        self.assertEqual(w.degree, 1)
        self.assertEqual(report.determinant, 1)
        self.assertEqual(report.kernel_dimension, 0)
        self.assertEqual(report.components[0].dropped_row, 6)
        self.assertEqual(report.pivot_columns, (1, 2, 3, 4, 5))

    def test_triangle(self):
        w, report = synth_arbitrary(fixtures.TRIANGLE)
        self.assertEqual(w.weights, (1, 1, 1))
        self.assertEqual(w.degree, 2)
        self.assertEqual(report.determinant, 2)
        self.assertEqual(report.scale, Fraction(2))
        self.assertIsNone(report.components[0].dropped_row)

    def test_upper_pattern(self):
        w, report = synth_arbitrary(fixtures.UPPER_PATTERN)
        self.assertEqual(w, fixtures.UPPER_PATTERN_WEIGHTS)
        self.assertEqual(report.components[0].dropped_row, 6)

    def test_wheel_has_a_kernel(self):
        w, report = synth_arbitrary(fixtures.WHEEL)
        self.assertTrue(verify_assignment(fixtures.WHEEL, w))
        self.assertEqual(report.kernel_dimension, 3)

    def test_report_serializes_scale(self):
        _, report = synth_arbitrary(fixtures.TRIANGLE)
        self.assertEqual(report.model_dump(mode="json")["scale"], "2")

    def test_refuses_unbalanced(self):
        with self.assertRaises(NotArbitrarilyRegularizable):
            synth_arbitrary(fixtures.STAR)
        with self.assertRaises(NotArbitrarilyRegularizable):
            synth_arbitrary(fixtures.UNBALANCED_CLASSES)

    def test_random_balanced_graphs(self):
        rng = np.random.default_rng(29)
        solved = 0
        for _ in range(300):
            n = int(rng.integers(1, 8))
            directed = bool(rng.integers(0, 2))
            pattern = rng.random((n, n)) < 0.4
            if not directed:
                pattern = np.triu(pattern)
                pattern = pattern | pattern.T
            g = Graph.from_matrix(pattern.astype(int), directed=directed)
            try:
                w, report = synth_arbitrary(g)
            except NotArbitrarilyRegularizable:
                continue
            solved += 1
            self.assertTrue(verify_assignment(g, w), g.edges)
            self.assertTrue(w.is_integral)
            self.assertGreater(report.determinant, 0)
        self.assertGreater(solved, 0)


class TestKernel(unittest.TestCase):
    def test_chair(self):
        w = kernel_witness(fixtures.CHAIR)
        self.assertEqual(w, fixtures.CHAIR_KERNEL)

    def test_tree_has_only_trivial_kernel(self):
        with self.assertRaises(AcyclicOnlyTrivial):
            kernel_witness(fixtures.STAR)

    def test_triangle_columns_are_independent(self):
        with self.assertRaises(AcyclicOnlyTrivial):
            kernel_witness(fixtures.TRIANGLE)

    def test_directed_two_cycle_and_loops(self):
        w = kernel_witness(fixtures.directed(2, [(1, 1), (1, 2), (2, 1), (2, 2)]))
        self.assertEqual(w.weights, (1, -1, -1, 1))
        self.assertEqual(w.degree, 0)

    def test_kernel_vectors_vanish(self):
        for g in (fixtures.WHEEL, fixtures.K4, fixtures.CYCLE_LOOP_TWO_TWO_CYCLES):
            w = kernel_witness(g)
            self.assertFalse(w.is_zero)
            self.assertTrue(all(total == 0 for total in build_incidence(g).apply(w.weights)))
            first = next(value for value in w.weights if value)
            self.assertGreater(first, 0)


if __name__ == '__main__':
    unittest.main()
