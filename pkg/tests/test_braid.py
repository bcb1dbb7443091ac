#!/usr/bin/env python3
"""Unit tests for braid moves, induced permutations and strata."""

import os
import sys
import unittest


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "scripts"))

from modcomp.braid import (  # noqa: E402
    BraidMove,
    MoveKind,
    braid_act,
    format_orbit_sizes,
    induced_permutation,
    modular_generators,
    orbits_of,
    strata,
)
from modcomp.errors import IncompleteClassListError  # noqa: E402
from modcomp.genvec import Signature, aut_classes, class_lookup, enumerate_vectors  # noqa: E402
from modcomp.groups import automorphisms, build_group, closure  # noqa: E402
from modcomp.pipeline import Pipeline  # noqa: E402


SLOW = os.environ.get("MODCOMP_SLOW") == "1"


class BraidMoveTests(unittest.TestCase):
    def setUp(self):
        self.G = build_group("sym3")
        self.w = {name: self.G.evaluate(name) for name in ("x", "y", "x*y", "x*y^2", "y^2")}

    def test_phi_inverse_on_example_vector(self):
        w = self.w
        v2 = (w["x"], w["x*y"], w["y"], w["y"])
        moved = braid_act(self.G, BraidMove.phi_inverse(1), v2)
        self.assertEqual(moved, (w["x*y"], w["x*y^2"], w["y"], w["y"]))

    def test_phi_inverse_fixes_first_example_vector(self):
        w = self.w
        v1 = (w["x"], w["x"], w["y"], w["y^2"])
        self.assertEqual(braid_act(self.G, BraidMove.phi_inverse(1), v1), v1)

    def test_phi_then_inverse_is_identity(self):
        vectors = enumerate_vectors(self.G, Signature((2, 2, 3, 3)))
        for j in (1, 2, 3):
            for v in vectors:
                there = braid_act(self.G, BraidMove.phi(j), v)
                self.assertEqual(braid_act(self.G, BraidMove.phi_inverse(j), there), v)

    def test_pure_words(self):
        self.assertEqual(BraidMove.pure(1, 2).word(), (BraidMove.phi(1), BraidMove.phi(1)))
        self.assertEqual(
            BraidMove.pure(1, 3).word(),
            (BraidMove.phi(2), BraidMove.phi(1), BraidMove.phi(1), BraidMove.phi_inverse(2)),
        )
        move = BraidMove.pure(2, 4)
        inverse_word = move.inverse().word()
        self.assertEqual(inverse_word, tuple(m.inverse() for m in reversed(move.word())))

    def test_pure_move_inverse_undoes_move(self):
        G = build_group("alt5")
        vectors = enumerate_vectors(G, Signature((2, 2, 2, 3)))[:50]
        for move in modular_generators(Signature((2, 2, 2, 3))):
            for v in vectors:
                self.assertEqual(braid_act(G, move.inverse(), braid_act(G, move, v)), v)

    def test_moves_preserve_vector_invariants(self):
        for token, periods in (("sym3", (2, 2, 3, 3)), ("sg21_1", (3, 3, 7, 7))):
            G = build_group(token)
            s = Signature(periods)
            for v in enumerate_vectors(G, s):
                for move in modular_generators(s):
                    moved = braid_act(G, move, v, check=True)
                    self.assertEqual(G.multiply(*moved), 0)
                    self.assertEqual(tuple(G.elem_order[c] for c in moved), periods)
                    self.assertEqual(len(closure(G, moved)), G.order)

    def test_invalid_indices(self):
        with self.assertRaises(ValueError):
            BraidMove.phi(4)
        with self.assertRaises(ValueError):
            BraidMove.pure(3, 2)

    def test_labels(self):
        self.assertEqual(BraidMove.phi(2).label, "Phi(2)")
        self.assertEqual(BraidMove.phi_inverse(1).label, "Phi^-1(1)")
        self.assertEqual(BraidMove.pure(1, 4).inverse().label, "A^-1(1,4)")
        self.assertEqual(BraidMove.pure(1, 4).inverse().kind, MoveKind.PURE_INVERSE)


class ModularGeneratorTests(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(len(modular_generators(Signature((2, 2, 3, 3)))), 10)
        self.assertEqual(len(modular_generators(Signature((5, 5, 5, 5)))), 12)
        self.assertEqual(len(modular_generators(Signature((2, 3, 3, 5)))), 8)
        self.assertEqual(len(modular_generators(Signature((2, 3, 5, 7)))), 6)

    def test_only_signature_preserving_moves(self):
        s = Signature((2, 3, 3, 5))
        for move in modular_generators(s):
            self.assertTrue(move.is_signature_preserving(s.periods))
        self.assertFalse(BraidMove.phi(1).is_signature_preserving(s.periods))


class StrataTests(unittest.TestCase):
    def test_orbits_of(self):
        self.assertEqual(orbits_of(4, [(1, 0, 2, 3), (0, 1, 3, 2)]), [(0, 1), (2, 3)])
        self.assertEqual(orbits_of(3, []), [(0,), (1,), (2,)])
        self.assertEqual(format_orbit_sizes((16, 6, 15, 10)), "(6, 10, 15, 16)")

    def test_sym3_single_orbit(self):
        partition = strata(build_group("sym3"), Signature((2, 2, 3, 3)))
        self.assertEqual(partition.orbit_sizes, (2,))
        self.assertEqual(partition.orbit_of(1), 0)

    def test_induced_permutations_are_bijections(self):
        G = build_group("sg21_1")
        s = Signature((3, 3, 7, 7))
        auts = automorphisms(G)
        classes = aut_classes(G, enumerate_vectors(G, s), auts)
        lookup = class_lookup(classes, auts)
        for move in modular_generators(s):
            perm = induced_permutation(G, move, classes, lookup)
            self.assertEqual(sorted(perm), list(range(len(classes))))

    def test_sym3_induced_permutations(self):
        pipe = Pipeline("sym3", Signature((2, 2, 3, 3)))
        G, classes, lookup = pipe.group, pipe.classes, pipe.lookup
        self.assertEqual(induced_permutation(G, BraidMove.pure(2, 3), classes, lookup), (1, 0))
        self.assertEqual(induced_permutation(G, BraidMove.phi(3), classes, lookup), (0, 1))

    def test_inverse_move_induces_inverse_permutation(self):
        for token, periods in (("sym3", (2, 2, 3, 3)), ("sg21_1", (3, 3, 7, 7))):
            pipe = Pipeline(token, Signature(periods))
            for move in modular_generators(pipe.signature):
                there = induced_permutation(pipe.group, move, pipe.classes, pipe.lookup)
                back = induced_permutation(pipe.group, move.inverse(), pipe.classes, pipe.lookup)
                with self.subTest(group=token, move=move.label):
                    self.assertEqual(tuple(back[k] for k in there), tuple(range(len(pipe.classes))))

    def test_incomplete_class_list(self):
        G = build_group("sym3")
        s = Signature((2, 2, 3, 3))
        auts = automorphisms(G)
        classes = aut_classes(G, enumerate_vectors(G, s), auts)
        partial = classes[:1]
        lookup = class_lookup(partial, auts)
        with self.assertRaises(IncompleteClassListError):
            for move in modular_generators(s):
                induced_permutation(G, move, partial, lookup)

    def test_census_rows(self):
        cases = (
            ("sg21_1", (3, 3, 7, 7), (6, 6)),
            ("alt5", (2, 2, 2, 3), (9,)),
            ("alt5", (2, 3, 3, 5), (20,)),
            ("alt5", (5, 5, 5, 5), (6, 10, 15, 16)),
            ("cyclic:13", (13, 13, 13, 13), (3, 4, 6, 12, 12, 12, 12, 12, 12, 24, 24)),
        )
        for token, periods, sizes in cases:
            with self.subTest(group=token, signature=periods):
                self.assertEqual(Pipeline(token, Signature(periods)).strata.orbit_sizes, sizes)

    def test_threads_do_not_change_orbits(self):
        one = Pipeline("alt5", Signature((5, 5, 5, 5))).strata
        many = Pipeline("alt5", Signature((5, 5, 5, 5)), threads=4).strata
        self.assertEqual(one.orbits, many.orbits)

    @unittest.skipUnless(SLOW, "set MODCOMP_SLOW=1 for the PSL(2,7) rows")
    def test_psl27_rows(self):
        pipe = Pipeline("psl2_7", Signature((2, 2, 3, 3)))
        self.assertEqual(pipe.group.order, 168)
        self.assertEqual(len(pipe.automorphisms), 336)
        self.assertEqual(pipe.genus, 29)
        self.assertEqual(len(pipe.classes), 15)
        self.assertEqual(pipe.strata.orbit_sizes, (15,))
        pipe = Pipeline("psl2_7", Signature((7, 7, 7, 7)))
        self.assertEqual(pipe.genus, 121)
        self.assertEqual(len(pipe.classes), 95)
        self.assertEqual(pipe.strata.orbit_sizes, (6, 7, 16, 24, 42))


if __name__ == "__main__":
    unittest.main()
