#!/usr/bin/env python3
"""Unit tests for signatures, generating-vector enumeration and Aut(G) classes."""

import itertools
import os
import sys
import unittest


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "scripts"))

from modcomp.errors import SignatureError, VectorCountCapError  # noqa: E402
from modcomp.genvec import (  # noqa: E402
    Signature,
    aut_classes,
    canonical_form,
    class_lookup,
    enumerate_vectors,
    genus,
    is_generating_vector,
    parse_signature,
)
from modcomp.groups import PRESETS, automorphisms, build_group  # noqa: E402


def naive_vectors(G, s):
    """Quadruple loop over elements of the right orders, with a saturation closure."""
    found = []
    pools = [[g for g in range(G.order) if G.elem_order[g] == m] for m in s.periods]
    for v in itertools.product(*pools):
        if G.multiply(*v) != 0:
            continue
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for c in v:
                    b = G.mul[a][c]
                    if b not in reached:
                        reached.add(b)
                        nxt.append(b)
            frontier = nxt
        if len(reached) == G.order:
            found.append(v)
    return found


def planar_signatures(G):
    """Every non-decreasing period quadruple drawn from the element orders of G."""
    periods = sorted({n for n in G.elem_order if n >= 2})
    return [Signature(p) for p in itertools.combinations_with_replacement(periods, 4)]


class SignatureTests(unittest.TestCase):
    def test_parse(self):
        self.assertEqual(parse_signature("2,2,3,3").periods, (2, 2, 3, 3))
        self.assertEqual(parse_signature("(0;5,5,5,5)").periods, (5, 5, 5, 5))
        self.assertEqual(str(parse_signature("2, 3, 3, 5")), "(0;2,3,3,5)")
        self.assertEqual(parse_signature("2,2,2,3").label, "(2,2,2,3)")

    def test_invalid(self):
        for text in ("3,2,2,2", "2,2,3", "1,2,3,4", "a,b,c,d", "2,2,3,3,3"):
            with self.subTest(text=text):
                with self.assertRaises(SignatureError):
                    parse_signature(text)
        with self.assertRaises(SignatureError):
            Signature((2, 2, 3, 3), quotient_genus=1)

    def test_genus(self):
        self.assertEqual(genus(build_group("sym3"), Signature((2, 2, 3, 3))), 2)
        self.assertEqual(genus(build_group("alt5"), Signature((5, 5, 5, 5))), 37)
        self.assertEqual(genus(build_group("alt5"), Signature((2, 2, 2, 3))), 6)
        self.assertEqual(genus(build_group("alt5"), Signature((2, 3, 3, 5))), 20)
        self.assertEqual(genus(build_group("cyclic:13"), Signature((13, 13, 13, 13))), 12)
        self.assertEqual(genus(build_group("sg21_1"), Signature((3, 3, 7, 7))), 12)

    def test_non_integral_genus(self):
        with self.assertRaises(SignatureError):
            genus(build_group("cyclic:2"), Signature((3, 3, 3, 3)))


class EnumerationTests(unittest.TestCase):
    def test_sym3(self):
        G = build_group("sym3")
        s = Signature((2, 2, 3, 3))
        vectors = enumerate_vectors(G, s)
        self.assertEqual(len(vectors), 12)
        self.assertEqual(vectors, sorted(vectors))
        self.assertTrue(all(is_generating_vector(G, s, v) for v in vectors))

    def test_cyclic13(self):
        G = build_group("cyclic:13")
        vectors = enumerate_vectors(G, Signature((13, 13, 13, 13)))
        self.assertEqual(len(vectors), 1596)

    def test_empty_when_no_elements_of_a_period(self):
        self.assertEqual(enumerate_vectors(build_group("cyclic:2"), Signature((3, 3, 3, 3))), [])

    def test_matches_naive_oracle(self):
        cases = (
            ("sym3", (2, 2, 3, 3)),
            ("sym3", (2, 2, 2, 2)),
            ("cyclic:5", (5, 5, 5, 5)),
            ("cyclic:6", (2, 3, 6, 6)),
            ("cyclic:12", (2, 3, 4, 12)),
            ("sg21_1", (3, 3, 7, 7)),
            ("sg21_1", (3, 3, 3, 3)),
        )
        for token, periods in cases:
            with self.subTest(group=token, signature=periods):
                G = build_group(token)
                s = Signature(periods)
                self.assertEqual(enumerate_vectors(G, s), naive_vectors(G, s))

    def test_matches_naive_oracle_on_every_small_group(self):
        groups = [build_group(f"cyclic:{n}") for n in range(2, 22)]
        groups += [G for G in map(build_group, sorted(PRESETS)) if G.order <= 21]
        self.assertEqual(len(groups), 22)
        for G in groups:
            for s in planar_signatures(G):
                with self.subTest(group=G.name, signature=s.periods):
                    self.assertEqual(enumerate_vectors(G, s), naive_vectors(G, s))

    def test_threads_do_not_change_result(self):
        G = build_group("alt5")
        s = Signature((2, 2, 2, 3))
        self.assertEqual(enumerate_vectors(G, s, threads=4), enumerate_vectors(G, s))

    def test_vector_cap(self):
        with self.assertRaises(VectorCountCapError):
            enumerate_vectors(build_group("sym3"), Signature((2, 2, 3, 3)), max_vectors=5)


class AutClassTests(unittest.TestCase):
    def setUp(self):
        self.G = build_group("sym3")
        self.s = Signature((2, 2, 3, 3))
        self.auts = automorphisms(self.G)
        self.vectors = enumerate_vectors(self.G, self.s)
        self.classes = aut_classes(self.G, self.vectors, self.auts)

    def test_sym3_representatives(self):
        G = self.G
        v1 = tuple(G.evaluate(w) for w in ("x", "x", "y", "y^2"))
        v2 = tuple(G.evaluate(w) for w in ("x", "x*y", "y", "y"))
        self.assertEqual([c.representative for c in self.classes], [v1, v2])
        self.assertEqual([c.class_index for c in self.classes], [0, 1])
        self.assertEqual([c.orbit_size for c in self.classes], [6, 6])

    def test_canonical_form_is_idempotent(self):
        reps = {c.representative for c in self.classes}
        for v in self.vectors:
            form = canonical_form(v, self.auts)
            self.assertIn(form, reps)
            self.assertEqual(canonical_form(form, self.auts), form)

    def test_lookup_covers_every_vector(self):
        lookup = class_lookup(self.classes, self.auts)
        self.assertEqual(set(lookup), set(self.vectors))

    def test_cyclic13_classes(self):
        G = build_group("cyclic:13")
        classes = aut_classes(G, enumerate_vectors(G, Signature((13, 13, 13, 13))))
        self.assertEqual(len(classes), 133)
        self.assertEqual(sum(c.orbit_size for c in classes), 1596)
        reps = [c.representative for c in classes]
        self.assertEqual(reps, sorted(reps))

    def test_alt5_classes(self):
        G = build_group("alt5")
        for periods, count in (((2, 2, 2, 3), 9), ((2, 3, 3, 5), 20), ((5, 5, 5, 5), 47)):
            with self.subTest(signature=periods):
                self.assertEqual(len(aut_classes(G, enumerate_vectors(G, Signature(periods)))), count)

    def test_empty_input(self):
        self.assertEqual(aut_classes(self.G, [], self.auts), [])


if __name__ == "__main__":
    unittest.main()
