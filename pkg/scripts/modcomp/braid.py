"""Braid moves on generating vectors and the strata they cut out.

Elementary moves act on adjacent entries j, j+1 (1-based):

    PhiInverse(j):  (a, b) -> (b, b^-1 a b)
    Phi(j):         (a, b) -> (a b a^-1, a)

The pure braid generators are the words

    A(i,j) = (Phi(j-1) ... Phi(i+1)) Phi(i)^2 (Phi(j-1) ... Phi(i+1))^-1

applied right to left. Together with Phi(j) / PhiInverse(j) for every j with
m_j = m_{j+1} they generate the signature-preserving modular group, whose
induced permutations on Aut(G) classes have the strata as orbits.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import IncompleteClassListError
from .genvec import GeneratingVector, Signature, VectorClass, aut_classes, class_lookup, enumerate_vectors
from .groups import GroupTable, automorphisms, closure

logger = logging.getLogger(__name__)


class MoveKind(str, enum.Enum):
    PHI = "Phi"
    PHI_INVERSE = "PhiInverse"
    PURE = "PureA"
    PURE_INVERSE = "PureAInverse"


@dataclass(frozen=True)
class BraidMove:
    kind: MoveKind
    j: int
    i: int = 0

    def __post_init__(self):
        if self.kind in (MoveKind.PHI, MoveKind.PHI_INVERSE):
            if not 1 <= self.j <= 3:
                raise ValueError(f"Phi index must be in 1..3, got {self.j}")
        elif not 1 <= self.i < self.j <= 4:
            raise ValueError(f"Pure braid indices must satisfy 1 <= i < j <= 4, got ({self.i},{self.j})")

    @classmethod
    def phi(cls, j: int) -> "BraidMove":
        return cls(MoveKind.PHI, j)

    @classmethod
    def phi_inverse(cls, j: int) -> "BraidMove":
        return cls(MoveKind.PHI_INVERSE, j)

    @classmethod
    def pure(cls, i: int, j: int) -> "BraidMove":
        return cls(MoveKind.PURE, j, i)

    def inverse(self) -> "BraidMove":
        flipped = {
            MoveKind.PHI: MoveKind.PHI_INVERSE,
            MoveKind.PHI_INVERSE: MoveKind.PHI,
            MoveKind.PURE: MoveKind.PURE_INVERSE,
            MoveKind.PURE_INVERSE: MoveKind.PURE,
        }
        return BraidMove(flipped[self.kind], self.j, self.i)

    def word(self) -> tuple["BraidMove", ...]:
        """Elementary moves, written left to right and applied right to left."""
        if self.kind in (MoveKind.PHI, MoveKind.PHI_INVERSE):
            return (self,)
        i, j = self.i, self.j
        conj = tuple(BraidMove.phi(k) for k in range(j - 1, i, -1))
        conj_inv = tuple(m.inverse() for m in reversed(conj))
        core = (BraidMove.phi(i), BraidMove.phi(i))
        word = conj + core + conj_inv
        if self.kind == MoveKind.PURE_INVERSE:
            word = tuple(m.inverse() for m in reversed(word))
        return word

    def is_signature_preserving(self, periods: Sequence[int]) -> bool:
        if self.kind in (MoveKind.PURE, MoveKind.PURE_INVERSE):
            return True
        return periods[self.j - 1] == periods[self.j]

    @property
    def label(self) -> str:
        if self.kind == MoveKind.PHI:
            return f"Phi({self.j})"
        if self.kind == MoveKind.PHI_INVERSE:
            return f"Phi^-1({self.j})"
        if self.kind == MoveKind.PURE:
            return f"A({self.i},{self.j})"
        return f"A^-1({self.i},{self.j})"


def _elementary(G: GroupTable, move: BraidMove, vector: list[int]) -> None:
    p = move.j - 1
    a, b = vector[p], vector[p + 1]
    if move.kind == MoveKind.PHI:
        vector[p], vector[p + 1] = G.conjugate(a, b), a
    else:
        vector[p], vector[p + 1] = b, G.multiply(G.inv[b], a, b)


def braid_act(G: GroupTable, move: BraidMove, vector: Sequence[int], check: bool = False) -> GeneratingVector:
    result = list(vector)
    for elementary in reversed(move.word()):
        _elementary(G, elementary, result)
    if check:
        _check_move(G, move, vector, result)
    return tuple(result)


def _check_move(G: GroupTable, move: BraidMove, before: Sequence[int], after: Sequence[int]) -> None:
    if G.multiply(*after) != G.multiply(*before):
        raise RuntimeError(f"{move.label} broke the product relation on {tuple(before)}")
    if len(closure(G, after)) != len(closure(G, before)):
        raise RuntimeError(f"{move.label} changed the generated subgroup of {tuple(before)}")
    periods = [G.elem_order[c] for c in before]
    if move.is_signature_preserving(periods) and [G.elem_order[c] for c in after] != periods:
        raise RuntimeError(f"{move.label} changed the periods of {tuple(before)}")
    if sorted(G.elem_order[c] for c in after) != sorted(periods):
        raise RuntimeError(f"{move.label} changed the period multiset of {tuple(before)}")


def modular_generators(s: Signature) -> list[BraidMove]:
    moves = [BraidMove.pure(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    for j in range(1, 4):
        if s.periods[j - 1] == s.periods[j]:
            moves.extend((BraidMove.phi(j), BraidMove.phi_inverse(j)))
    return moves


def induced_permutation(
    G: GroupTable,
    move: BraidMove,
    classes: Sequence[VectorClass],
    lookup: Mapping[GeneratingVector, int],
) -> tuple[int, ...]:
    """q_move: class i -> class of move . representative_i."""
    images = []
    for cls in classes:
        moved = braid_act(G, move, cls.representative)
        target = lookup.get(moved)
        if target is None:
            raise IncompleteClassListError(
                f"{move.label} maps class {cls.class_index} to {moved}, which is in no listed class"
            )
        images.append(target)
    if len(set(images)) != len(images):
        raise IncompleteClassListError(f"{move.label} does not induce a bijection on the class list")
    return tuple(images)


@dataclass(frozen=True)
class StratumPartition:
    orbits: tuple[tuple[int, ...], ...]
    generator_set: tuple[BraidMove, ...]

    @property
    def orbit_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(len(o) for o in self.orbits))

    def orbit_of(self, class_index: int) -> int:
        for k, orbit in enumerate(self.orbits):
            if class_index in orbit:
                return k
        raise KeyError(class_index)


def format_orbit_sizes(sizes: Sequence[int]) -> str:
    """Orbit sizes in the census style, e.g. ``(6, 10, 15, 16)``."""
    return "(" + ", ".join(str(n) for n in sorted(sizes)) + ")"


def orbits_of(n: int, permutations: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Orbits of the group generated by ``permutations`` on range(n), by BFS."""
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for perm in permutations:
                y = perm[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    queue.append(y)
        orbits.append(tuple(sorted(orbit)))
    return orbits


def strata(
    G: GroupTable,
    s: Signature,
    classes: Sequence[VectorClass] | None = None,
    lookup: Mapping[GeneratingVector, int] | None = None,
    threads: int = 1,
) -> StratumPartition:
    """Orbits of the induced modular action on the Aut(G) classes of (G, s)."""
    if classes is None or lookup is None:
        auts = automorphisms(G)
        classes = aut_classes(G, enumerate_vectors(G, s, threads=threads), auts)
        lookup = class_lookup(classes, auts)
    moves = modular_generators(s)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            perms = list(pool.map(lambda m: induced_permutation(G, m, classes, lookup), moves))
    else:
        perms = [induced_permutation(G, m, classes, lookup) for m in moves]
    orbits = orbits_of(len(classes), perms)
    partition = StratumPartition(tuple(orbits), tuple(moves))
    logger.info("%s %s: %d strata, sizes %s", G.name, s, len(orbits),
                format_orbit_sizes(partition.orbit_sizes))
    return partition
