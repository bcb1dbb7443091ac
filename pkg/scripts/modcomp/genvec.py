"""Generating vectors for planar four-point signatures.

A generating vector for (0; m1, m2, m3, m4) is a tuple (c1, c2, c3, c4) with
c1 c2 c3 c4 = 1, o(cj) = mj, and {c1, ..., c4} generating G. Vectors are
plain tuples of element ids and compare lexicographically, so the canonical
element ordering of the GroupTable fixes what "lexicographic minimum" means.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SignatureError, VectorCountCapError
from .groups import Automorphism, GroupTable, automorphisms, closure

logger = logging.getLogger(__name__)

GeneratingVector = tuple[int, int, int, int]

DEFAULT_MAX_VECTORS = 2_000_000

_SIGNATURE_RE = re.compile(r"^\(?\s*(?:0\s*;\s*)?([0-9,\s]+?)\s*\)?$")


@dataclass(frozen=True)
class Signature:
    periods: tuple[int, int, int, int]
    quotient_genus: int = 0

    def __post_init__(self):
        if self.quotient_genus != 0:
            raise SignatureError("Only planar signatures (quotient genus 0) are supported")
        if len(self.periods) != 4:
            raise SignatureError(f"Expected exactly 4 periods, got {len(self.periods)}")
        if any(m < 2 for m in self.periods):
            raise SignatureError(f"Periods must be at least 2: {self.periods}")
        if list(self.periods) != sorted(self.periods):
            raise SignatureError(f"Periods must be non-decreasing: {self.periods}")

    def __str__(self):
        return "(0;" + ",".join(str(m) for m in self.periods) + ")"

    @property
    def label(self) -> str:
        return "(" + ",".join(str(m) for m in self.periods) + ")"


def parse_signature(text: str) -> Signature:
    """Parse ``2,2,3,3`` or ``(0;2,2,3,3)``."""
    m = _SIGNATURE_RE.match(text.strip())
    if not m:
        raise SignatureError(f"Invalid signature: {text!r}")
    try:
        periods = tuple(int(p) for p in m.group(1).split(",") if p.strip())
    except ValueError as exc:
        raise SignatureError(f"Invalid signature: {text!r}") from exc
    return Signature(periods)


def genus(G: GroupTable, s: Signature) -> int:
    """Riemann-Hurwitz: sigma = 1 + |G|/2 (2h - 2 + r - sum 1/mj)."""
    area = 2 * s.quotient_genus - 2 + len(s.periods) - sum(Fraction(1, m) for m in s.periods)
    sigma = 1 + Fraction(G.order, 2) * area
    if sigma.denominator != 1:
        raise SignatureError(f"{G.name} with {s} gives non-integral genus {sigma}")
    if sigma < 2:
        raise SignatureError(f"{G.name} with {s} gives genus {sigma}; a hyperbolic action needs genus >= 2")
    return int(sigma)


def is_generating_vector(G: GroupTable, s: Signature, vector: Sequence[int]) -> bool:
    if len(vector) != len(s.periods):
        return False
    if G.multiply(*vector) != 0:
        return False
    if any(G.elem_order[c] != m for c, m in zip(vector, s.periods)):
        return False
    return len(closure(G, vector)) == G.order


def _vectors_from(G: GroupTable, s: Signature, c1: int, lists) -> list[GeneratingVector]:
    mul, inv, elem_order = G.mul, G.inv, G.elem_order
    n = G.order
    l2, l3 = lists[1], lists[2]
    m4 = s.periods[3]
    row1 = mul[c1]
    found = []
    for c2 in l2:
        row12 = mul[row1[c2]]
        sub = closure(G, (c1, c2))
        full = len(sub) == n
        for c3 in l3:
            c4 = inv[row12[c3]]
            if elem_order[c4] != m4:
                continue
            if full or len(closure(G, (c1, c2, c3), start=sub)) == n:
                found.append((c1, c2, c3, c4))
    return found


def enumerate_vectors(
    G: GroupTable,
    s: Signature,
    max_vectors: int = DEFAULT_MAX_VECTORS,
    threads: int = 1,
) -> list[GeneratingVector]:
    """All generating vectors for (G, s), in lexicographic order of element ids."""
    by_order = G.elements_by_order
    lists = [by_order.get(m, ()) for m in s.periods]
    if any(not ids for ids in lists):
        logger.info("%s %s: no elements of some period, 0 vectors", G.name, s)
        return []

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda c1: _vectors_from(G, s, c1, lists), lists[0]))
    else:
        chunks = [_vectors_from(G, s, c1, lists) for c1 in lists[0]]

    vectors = []
    for chunk in chunks:
        vectors.extend(chunk)
        if len(vectors) > max_vectors:
            raise VectorCountCapError(
                f"{G.name} {s}: more than {max_vectors} generating vectors (raise --max-vectors)"
            )
    logger.info("%s %s: %d generating vectors", G.name, s, len(vectors))
    return vectors


@dataclass(frozen=True)
class VectorClass:
    representative: GeneratingVector
    class_index: int
    orbit_size: int


def canonical_form(vector: Sequence[int], auts: Iterable[Automorphism]) -> GeneratingVector:
    """Lexicographic minimum of the Aut(G) orbit of ``vector``."""
    return min(a.apply(vector) for a in auts)


def aut_classes(
    G: GroupTable,
    vectors: Iterable[GeneratingVector],
    auts: Sequence[Automorphism] | None = None,
) -> list[VectorClass]:
    """Partition vectors into Aut(G) orbits, sorted by lex-min representative."""
    if auts is None:
        auts = automorphisms(G)
    pending = set(vectors)
    orbits = []
    for vector in sorted(pending):
        if vector not in pending:
            continue
        orbit = {a.apply(vector) for a in auts}
        pending -= orbit
        orbits.append((min(orbit), len(orbit)))
    orbits.sort()
    classes = [VectorClass(rep, i, size) for i, (rep, size) in enumerate(orbits)]
    logger.info("%s: %d Aut(G) classes", G.name, len(classes))
    return classes


def class_lookup(classes: Sequence[VectorClass], auts: Sequence[Automorphism]) -> dict[GeneratingVector, int]:
    """Map every vector in the listed classes to its class index."""
    lookup = {}
    for cls in classes:
        for a in auts:
            lookup[a.apply(cls.representative)] = cls.class_index
    return lookup
