import unittest

import networkx as nx
import numpy as np

import fixtures
from errors import GraphKindError, ZeroRowOrColumn
from transform import (
    bipartite_partition,
    canonical_form,
    canonical_form_matrix,
    connected_components,
    edge_classes,
    is_chainable,
    is_chainable_matrix,
    rook_move_chainable,
    star_transform,
)


class TestStarTransform(unittest.TestCase):
    def test_directed_keeps_edges(self):
        sg = star_transform(fixtures.CYCLE3)
        self.assertEqual(sg.star_edges, fixtures.CYCLE3.edges)
        self.assertEqual(sg.source_edge, (1, 2, 3))
        self.assertEqual(sg.twins, ())

    def test_undirected_edges_become_twins(self):
        sg = star_transform(fixtures.TRIANGLE)
        self.assertEqual(sg.star_edges, ((1, 2), (2, 1), (2, 3), (3, 2), (3, 1), (1, 3)))
        self.assertEqual(sg.source_edge, (1, 1, 2, 2, 3, 3))
        self.assertEqual(sg.twins, ((1, 2), (3, 4), (5, 6)))

    def test_loop_gives_one_star_edge(self):
        sg = star_transform(fixtures.undirected(2, [(1, 1), (1, 2)]))
        self.assertEqual(sg.star_edges, ((1, 1), (1, 2), (2, 1)))
        self.assertEqual(sg.twins, ((2, 3),))

    def test_degrees_and_biadjacency(self):
        sg = star_transform(fixtures.UPPER_PATTERN)
        self.assertEqual(sg.white_degrees().tolist(), [3, 1, 1])
        self.assertEqual(sg.black_degrees().tolist(), [1, 1, 3])
        dense = sg.biadjacency().toarray()
        self.assertEqual(dense[0].tolist(), [1, 2, 3])
        self.assertEqual(dense[2, 2], 5)


class TestComponents(unittest.TestCase):
    def test_isolated_node_is_its_own_component(self):
        g = fixtures.undirected(5, fixtures.STAR.edges)
        self.assertEqual(connected_components(g), [(1, 2, 3, 4), (5,)])

    def test_directed_rejected(self):
        with self.assertRaises(GraphKindError):
            connected_components(fixtures.CYCLE3)
        with self.assertRaises(GraphKindError):
            bipartite_partition(fixtures.CYCLE3)

    def test_double_star_colouring(self):
        partition = bipartite_partition(fixtures.DOUBLE_STAR)
        self.assertTrue(partition.is_bipartite)
        component = partition.components[0]
        self.assertEqual(component.u_part, (1, 5, 6))
        self.assertEqual(component.w_part, (2, 3, 4))
        self.assertTrue(component.balanced)

    def test_star_unbalanced(self):
        component = bipartite_partition(fixtures.STAR).components[0]
        self.assertTrue(component.bipartite)
        self.assertFalse(component.balanced)

    def test_triangle_odd_walk(self):
        component = bipartite_partition(fixtures.TRIANGLE).components[0]
        self.assertFalse(component.bipartite)
        self.assertEqual(component.odd_cycle, (2, 1, 3))

    def test_loop_is_odd(self):
        partition = bipartite_partition(fixtures.undirected(3, [(1, 2), (3, 3)]))
        self.assertFalse(partition.is_bipartite)
        self.assertTrue(partition.components[0].bipartite)
        self.assertEqual(partition.components[1].odd_cycle, (3,))

    def test_colouring_is_proper(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.35]
            g = fixtures.undirected(n, pairs)
            reference = nx.Graph()
            reference.add_nodes_from(range(1, n + 1))
            reference.add_edges_from(pairs)
            partition = bipartite_partition(g)
            self.assertEqual(partition.is_bipartite, nx.is_bipartite(reference))
            for component in partition.components:
                if not component.bipartite:
                    continue
                side = {node: 0 for node in component.u_part}
                side.update({node: 1 for node in component.w_part})
                for tail, head in pairs:
                    if tail in side:
                        self.assertNotEqual(side[tail], side[head])


class TestEdgeClasses(unittest.TestCase):
    def test_unbalanced_classes(self):
        partition = edge_classes(fixtures.UNBALANCED_CLASSES)
        first, second = partition.classes
        self.assertEqual(first.edges, (1, 2, 5, 6))
        self.assertEqual(first.whites, (1, 2, 4))
        self.assertEqual(first.blacks, (2, 3))
        self.assertFalse(first.balanced)
        self.assertEqual(second.edges, (3, 4))
        self.assertEqual(second.whites, (3,))
        self.assertEqual(second.blacks, (1, 4))
        self.assertEqual(partition.class_of(5), 0)
        self.assertEqual(partition.class_of(4), 1)

    def test_permutation_classes_are_single_edges(self):
        partition = edge_classes(fixtures.CYCLE3)
        self.assertEqual([c.edges for c in partition.classes], [(1,), (2,), (3,)])
        self.assertTrue(all(c.balanced for c in partition.classes))

    def test_undirected_rejected(self):
        with self.assertRaises(GraphKindError):
            edge_classes(fixtures.TRIANGLE)


class TestChainability(unittest.TestCase):
    def test_known_graphs(self):
        self.assertTrue(is_chainable(fixtures.UPPER_PATTERN))
        self.assertTrue(is_chainable(fixtures.TRIANGLE))
        self.assertFalse(is_chainable(fixtures.CYCLE3))
        self.assertFalse(is_chainable(fixtures.SQUARE))
        self.assertFalse(is_chainable(fixtures.DOUBLE_STAR))

    def test_zero_row_is_not_chainable(self):
        self.assertFalse(is_chainable_matrix([[1, 1], [0, 0]]))
        self.assertFalse(rook_move_chainable([[1, 1], [0, 0]]))

    def test_rectangular_patterns(self):
        self.assertTrue(is_chainable_matrix([[1, 1, 0], [0, 1, 1]]))
        self.assertFalse(is_chainable_matrix([[1, 0, 0], [0, 1, 1]]))

    def test_agrees_with_rook_moves_and_networkx(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            rows, cols = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            pattern = (rng.random((rows, cols)) < 0.4).astype(int)
            reference = nx.Graph()
            reference.add_nodes_from(("r", i) for i in range(rows))
            reference.add_nodes_from(("c", j) for j in range(cols))
            reference.add_edges_from((("r", i), ("c", j)) for i, j in zip(*np.nonzero(pattern)))
            expected = nx.is_connected(reference) and min(dict(reference.degree).values()) > 0
            self.assertEqual(is_chainable_matrix(pattern), expected)
            self.assertEqual(rook_move_chainable(pattern), expected)


class TestCanonicalForm(unittest.TestCase):
    def test_double_star(self):
        form = canonical_form(fixtures.DOUBLE_STAR)
        self.assertEqual(form.row_perm, (1, 5, 6, 2, 3, 4))
        self.assertEqual(form.col_perm, (2, 3, 4, 1, 5, 6))
        self.assertEqual(form.blocks, ((3, 3), (3, 3)))
        self.assertTrue(form.all_square)

    def test_unbalanced_classes(self):
        form = canonical_form(fixtures.UNBALANCED_CLASSES)
        self.assertEqual(form.row_perm, (1, 2, 4, 3))
        self.assertEqual(form.col_perm, (2, 3, 1, 4))
        self.assertEqual(form.blocks, ((3, 2), (1, 2)))
        self.assertFalse(form.all_square)

    def test_permuted_matrix_is_block_diagonal(self):
        for g in (fixtures.DOUBLE_STAR, fixtures.UNBALANCED_CLASSES, fixtures.CYCLE_LOOP_TWO_CYCLE):
            form = canonical_form(g)
            permuted = form.apply(g.adjacency_matrix())
            inside = np.zeros_like(permuted, dtype=bool)
            for row_slice, col_slice in form.block_offsets():
                inside[row_slice, col_slice] = True
            self.assertEqual(int(permuted[~inside].sum()), 0)
            self.assertEqual(int(permuted.sum()), int(g.adjacency_matrix().sum()))

    def test_zero_column_raises(self):
        with self.assertRaises(ZeroRowOrColumn) as raised:
            canonical_form(fixtures.directed(2, [(1, 2)]))
        self.assertEqual(raised.exception.node, 1)
        self.assertEqual(raised.exception.side, "column")

    def test_matrix_entry_point(self):
        form = canonical_form_matrix([[1, 1], [0, 1]])
        self.assertEqual(form.blocks, ((2, 2),))
        with self.assertRaises(ZeroRowOrColumn):
            canonical_form_matrix([[1, 0], [1, 0]])


if __name__ == '__main__':
    unittest.main()
