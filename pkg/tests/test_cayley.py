#!/usr/bin/env python3
"""Unit tests for the modified Cayley graph."""

import os
import sys
import unittest


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "scripts"))

from modcomp.cayley import TypedEdge, build_graph, graph_fingerprint, to_adjacency, to_dot  # noqa: E402
from modcomp.errors import EdgeCollapseError  # noqa: E402
from modcomp.groups import build_group  # noqa: E402
from modcomp.tiling import crossover_sequence, make_cut_system  # noqa: E402


class CayleyGraphTests(unittest.TestCase):
    def setUp(self):
        self.G = build_group("sym3")
        self.E4 = make_cut_system("E4")
        G = self.G
        self.v1 = tuple(G.evaluate(w) for w in ("x", "x", "y", "y^2"))
        self.v2 = tuple(G.evaluate(w) for w in ("x", "x*y", "y", "y"))

    def graph(self, vector, cut=None):
        cut = cut or self.E4
        return build_graph(self.G, cut, crossover_sequence(self.G, cut, vector))

    def test_edges(self):
        cay = self.graph(self.v2)
        self.assertEqual(cay.graph.number_of_nodes(), 6)
        self.assertEqual(cay.graph.number_of_edges(), 48)
        self.assertTrue(cay.is_connected())
        taus = cay.source.taus
        for edge in cay.edges():
            self.assertEqual(edge.dst, self.G.mul[edge.src][taus[edge.position]])
            self.assertIn(edge.opposite(self.E4), cay.out_edges(edge.dst))

    def test_fingerprints(self):
        f1 = graph_fingerprint(self.graph(self.v1))
        f2 = graph_fingerprint(self.graph(self.v2))
        self.assertEqual(f1.multiplicities, (4, 2, 2))
        self.assertEqual(f2.multiplicities, (2, 2, 2, 2))
        self.assertEqual(f1.collapse_count, 0)
        self.assertNotEqual(f1, f2)

    def test_edge_collapse_is_refused(self):
        E1 = make_cut_system("E1")
        with self.assertRaises(EdgeCollapseError) as ctx:
            self.graph(self.v1, E1)
        self.assertEqual(ctx.exception.report.collapsed_edges, (1, 4))
        self.assertEqual(graph_fingerprint(self.graph(self.v2, E1)).collapse_count, 0)

    def test_left_translation_is_an_automorphism(self):
        cay = self.graph(self.v1)
        edges = set(cay.edges())
        for g in range(self.G.order):
            self.assertEqual(set(cay.left_translate(g).edges()), edges)

    def test_exports(self):
        cay = self.graph(self.v2)
        adjacency = to_adjacency(cay)
        self.assertEqual(sorted(adjacency, key=int), [str(g) for g in range(6)])
        self.assertEqual([label for label, _ in adjacency["0"]], list(self.E4.boundary_sequence))
        self.assertEqual(adjacency["0"][0][1], self.G.evaluate("x"))
        dot = to_dot(cay)
        self.assertIn("digraph", dot)
        self.assertIn("cayley_E4", dot)

    def test_typed_edge_ordering(self):
        self.assertLess(TypedEdge(0, 5, 1), TypedEdge(1, 0, 0))
        self.assertEqual(TypedEdge(0, 2, 3).opposite(self.E4), TypedEdge(7, 3, 2))


if __name__ == "__main__":
    unittest.main()
