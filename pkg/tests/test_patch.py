#!/usr/bin/env python3
"""Unit tests for partial isometries and the isometry matrix."""

import os
import sys
import unittest
from dataclasses import replace


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "scripts"))

from modcomp.errors import EdgeCollapseError, PatchInputError  # noqa: E402
from modcomp.genvec import Signature, VectorClass  # noqa: E402
from modcomp.groups import build_group  # noqa: E402
from modcomp.patch import (  # noqa: E402
    Selection,
    grow_patch,
    isometry_matrix,
    sample_patches,
    seed_compatible,
    verify_patch,
)
from modcomp.pipeline import Pipeline  # noqa: E402
from modcomp.reference import matrix_diff, published_matrix  # noqa: E402
from modcomp.tiling import crossover_sequence, make_cut_system  # noqa: E402


class GrowPatchTests(unittest.TestCase):
    def setUp(self):
        self.G = build_group("sym3")
        self.E4 = make_cut_system("E4")
        G = self.G
        self.v1 = tuple(G.evaluate(w) for w in ("x", "x", "y", "y^2"))
        self.v2 = tuple(G.evaluate(w) for w in ("x", "x*y", "y", "y"))
        self.seq1 = crossover_sequence(G, self.E4, self.v1)
        self.seq2 = crossover_sequence(G, self.E4, self.v2)

    def test_self_patch_is_complete_identity(self):
        for seq in (self.seq1, self.seq2):
            result = grow_patch(self.G, self.E4, seq, seq, check=True)
            self.assertTrue(result.complete)
            self.assertEqual(result.size, 6)
            self.assertEqual(dict(result.w), {g: g for g in range(6)})
            self.assertEqual(result.bad_edges, 0)
            self.assertTrue(verify_patch(self.G, self.E4, result, seq, seq))

    def test_sym3_companion_patches(self):
        forward = grow_patch(self.G, self.E4, self.seq2, self.seq1, check=True)
        backward = grow_patch(self.G, self.E4, self.seq1, self.seq2, check=True)
        self.assertEqual(forward.size, 2)
        self.assertEqual(backward.size, 1)
        self.assertFalse(forward.complete)
        self.assertEqual(forward.H[0], 0)
        self.assertTrue(verify_patch(self.G, self.E4, forward, self.seq2, self.seq1))
        self.assertTrue(verify_patch(self.G, self.E4, backward, self.seq1, self.seq2))

    def test_random_selection(self):
        with self.assertRaises(PatchInputError):
            grow_patch(self.G, self.E4, self.seq1, self.seq2, Selection.RANDOM)
        a = grow_patch(self.G, self.E4, self.seq2, self.seq1, "random", seed=7, check=True)
        b = grow_patch(self.G, self.E4, self.seq2, self.seq1, "random", seed=7)
        self.assertEqual(a, b)
        self.assertTrue(verify_patch(self.G, self.E4, a, self.seq2, self.seq1))

    def test_input_errors(self):
        E2 = make_cut_system("E2")
        with self.assertRaises(PatchInputError):
            grow_patch(self.G, E2, self.seq1, self.seq2)
        other = crossover_sequence(self.G, self.E4, tuple(self.G.evaluate(w) for w in ("x", "y", "y", "x*y")))
        with self.assertRaises(PatchInputError):
            grow_patch(self.G, self.E4, self.seq1, other)
        E1 = make_cut_system("E1")
        with self.assertRaises(EdgeCollapseError):
            grow_patch(self.G, E1, crossover_sequence(self.G, E1, self.v1), crossover_sequence(self.G, E1, self.v2))

    def test_verify_rejects_broken_patches(self):
        result = grow_patch(self.G, self.E4, self.seq1, self.seq1)
        swapped = dict(result.w)
        swapped[0], swapped[1] = swapped[1], swapped[0]
        self.assertFalse(verify_patch(self.G, self.E4, replace(result, w=swapped), self.seq1, self.seq1))
        shifted = {g: (g + 1) % 6 if g else 0 for g in range(6)}
        self.assertFalse(verify_patch(self.G, self.E4, replace(result, w=shifted), self.seq1, self.seq1))

    def test_seed_compatible(self):
        self.assertTrue(seed_compatible(self.seq1, self.seq1))
        self.assertFalse(seed_compatible(self.seq1, self.seq2))

    def test_sample_patches(self):
        sample = sample_patches(self.G, self.E4, self.seq2, self.seq1, range(20))
        self.assertEqual(len(sample.sizes), 20)
        self.assertTrue(1 <= sample.minimum <= sample.maximum < 6)
        self.assertTrue(sample.minimum <= sample.mean <= sample.maximum)
        with self.assertRaises(PatchInputError):
            sample_patches(self.G, self.E4, self.seq2, self.seq1, [])


class IsometryMatrixTests(unittest.TestCase):
    def test_sym3_matrix(self):
        pipe = Pipeline("sym3", Signature((2, 2, 3, 3)))
        matrix = isometry_matrix(pipe.group, pipe.signature, make_cut_system("E4"), pipe.classes)
        self.assertEqual(matrix.entries, ((6, 2), (1, 6)))
        self.assertEqual(matrix.entries, published_matrix("sym3", (2, 2, 3, 3), "E4"))
        self.assertEqual(matrix.compatible, ((True, False), (False, True)))
        self.assertEqual(matrix.flags, ())

    def test_entry_is_grown_on_column_class(self):
        pipe = Pipeline("sym3", Signature((2, 2, 3, 3)))
        cut = make_cut_system("E4")
        matrix = isometry_matrix(pipe.group, pipe.signature, cut, pipe.classes)
        seqs = [crossover_sequence(pipe.group, cut, c.representative) for c in pipe.classes]
        for i, row in enumerate(matrix.entries):
            for j, size in enumerate(row):
                self.assertEqual(size, grow_patch(pipe.group, cut, seqs[j], seqs[i]).size)
        self.assertEqual(matrix.entries[0][1], 2)

    def test_single_class(self):
        pipe = Pipeline("sym3", Signature((2, 2, 3, 3)))
        matrix = isometry_matrix(pipe.group, pipe.signature, make_cut_system("E4"), pipe.classes[1:])
        self.assertEqual(matrix.entries, ((6,),))

    def test_collapsed_classes_are_flagged(self):
        pipe = Pipeline("sym3", Signature((2, 2, 3, 3)))
        matrix = isometry_matrix(pipe.group, pipe.signature, make_cut_system("E1"), pipe.classes)
        self.assertEqual(matrix.entries, ((None, None), (None, 6)))
        self.assertEqual(len(matrix.flags), 1)

    def test_wrong_signature_is_rejected(self):
        G = build_group("sym3")
        bogus = VectorClass((1, 1, 4, 5), 0, 6)
        with self.assertRaises(PatchInputError):
            isometry_matrix(G, Signature((2, 3, 3, 3)), make_cut_system("E4"), [bogus])

    def test_alt5_matrix_properties(self):
        pipe = Pipeline("alt5", Signature((2, 2, 2, 3)))
        cut = make_cut_system("E4")
        matrix = isometry_matrix(pipe.group, pipe.signature, cut, pipe.classes, threads=2)
        self.assertEqual(len(matrix.entries), 9)
        for i, row in enumerate(matrix.entries):
            for j, size in enumerate(row):
                if i == j:
                    self.assertEqual(size, 60)
                else:
                    self.assertTrue(1 <= size < 60)
        published = published_matrix("alt5", (2, 2, 2, 3), "E4")
        for i, j, computed, expected in matrix_diff(matrix.entries, published):
            self.assertNotEqual(i, j)

    def test_random_patches_always_verify(self):
        pipe = Pipeline("alt5", Signature((2, 2, 2, 3)))
        cut = make_cut_system("E4")
        seqs = [crossover_sequence(pipe.group, cut, c.representative) for c in pipe.classes[:4]]
        for a in seqs:
            for b in seqs:
                for seed in range(3):
                    result = grow_patch(pipe.group, cut, a, b, Selection.RANDOM, seed, check=True)
                    self.assertTrue(verify_patch(pipe.group, cut, result, a, b))


if __name__ == "__main__":
    unittest.main()
