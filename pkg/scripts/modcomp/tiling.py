"""Cut systems E1-E4, crossover sequences and tiling degeneracies.

A cut system is a tree in the quotient sphere through the four cone points.
Cutting along it leaves a 2k-gon whose boundary reads the oriented edges

    E1   e1+ e2+ e3+ e3- e2- e1-
    E2   e1+ e2+ e2- e3+ e3- e1-
    E3   e1+ e2+ e3+ e3- e2- e4+ e4- e1-
    E4   e1+ e2+ e2- e3+ e3- e4+ e4- e1-

and each boundary position carries a crossover transformation, a word in the
generating vector. Around every tree vertex the spokes follow the cycle

    sigma(p) = op(p) - 1  (mod 2k)

of boundary positions; the one-turn product of crossovers along a spoke cycle
is the stabilizer generator cj at black vertex j and trivial at the white
vertex. The hard-coded spoke cycles below are checked against sigma when a
cut system is constructed.

Degeneracies of the lifted tiling:

    edge collapse     some crossover is trivial
    multi-edge        equal nontrivial crossovers at two or more positions
    vertex collapse   a repeated label in a sector labelling sequence
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import pydot

from .errors import CutSystemError
from .groups import GroupTable

logger = logging.getLogger(__name__)

CUT_IDS = ("E1", "E2", "E3", "E4")

_EDGE_LABEL_RE = re.compile(r"^e(\d+)([+-])$")
_FORMULA_RE = re.compile(r"^(\()?((?:c[1-4])+)(\))?(\^-1)?$")

# id -> (undirected edges, boundary sequence, crossover formulas, vertices)
# vertex: (label, colour, cone index or None, spoke cycle as oriented-edge labels)
CUT_TABLE = {
    "E1": (
        (("1", "2"), ("2", "3"), ("3", "4")),
        ("e1+", "e2+", "e3+", "e3-", "e2-", "e1-"),
        ("c1^-1", "(c1c2)^-1", "c4", "c4^-1", "c1c2", "c1"),
        (
            ("1", "black", 1, ("e1-",)),
            ("2", "black", 2, ("e1+", "e2-")),
            ("3", "black", 3, ("e2+", "e3-")),
            ("4", "black", 4, ("e3+",)),
        ),
    ),
    "E2": (
        (("1", "4"), ("2", "4"), ("3", "4")),
        ("e1+", "e2+", "e2-", "e3+", "e3-", "e1-"),
        ("c1^-1", "c2", "c2^-1", "c3", "c3^-1", "c1"),
        (
            ("1", "black", 1, ("e1-",)),
            ("2", "black", 2, ("e2+",)),
            ("3", "black", 3, ("e3+",)),
            ("4", "black", 4, ("e3-", "e2-", "e1+")),
        ),
    ),
    "E3": (
        (("1", "w"), ("2", "w"), ("2", "3"), ("4", "w")),
        ("e1+", "e2+", "e3+", "e3-", "e2-", "e4+", "e4-", "e1-"),
        ("c1^-1", "(c4c1)^-1", "c3", "c3^-1", "c4c1", "c4", "c4^-1", "c1"),
        (
            ("1", "black", 1, ("e1-",)),
            ("2", "black", 2, ("e2+", "e3-")),
            ("3", "black", 3, ("e3+",)),
            ("4", "black", 4, ("e4+",)),
            ("w", "white", None, ("e1+", "e4-", "e2-")),
        ),
    ),
    "E4": (
        (("1", "w"), ("2", "w"), ("3", "w"), ("4", "w")),
        ("e1+", "e2+", "e2-", "e3+", "e3-", "e4+", "e4-", "e1-"),
        ("c1^-1", "c2", "c2^-1", "c3", "c3^-1", "c4", "c4^-1", "c1"),
        (
            ("1", "black", 1, ("e1-",)),
            ("2", "black", 2, ("e2+",)),
            ("3", "black", 3, ("e3+",)),
            ("4", "black", 4, ("e4+",)),
            ("w", "white", None, ("e1+", "e4-", "e3-", "e2-")),
        ),
    ),
}


# ══════════════════════════════════════════════════════════════════
# Cut systems
# ══════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class CutVertex:
    label: str
    colour: str
    cone: int | None
    spokes: tuple[int, ...]


@dataclass(frozen=True)
class CutSystem:
    id: str
    undirected_edges: tuple[tuple[str, str], ...]
    boundary_sequence: tuple[str, ...]
    formulas: tuple[str, ...]
    words: tuple[tuple[tuple[int, int], ...], ...]
    opposite: tuple[int, ...]
    vertices: tuple[CutVertex, ...]

    @property
    def k(self) -> int:
        return len(self.undirected_edges)

    def vertex(self, label: str) -> CutVertex:
        for v in self.vertices:
            if v.label == str(label):
                return v
        raise CutSystemError(f"{self.id} has no vertex {label!r}")

    def undirected_edge(self, position: int) -> tuple[str, str]:
        m = _EDGE_LABEL_RE.match(self.boundary_sequence[position])
        return self.undirected_edges[int(m.group(1)) - 1]


def _parse_formula(text: str) -> tuple[tuple[int, int], ...]:
    """``(c1c2)^-1`` -> ((2, -1), (1, -1)); factors are (cone index, exponent)."""
    m = _FORMULA_RE.match(text.replace(" ", ""))
    if not m or bool(m.group(1)) != bool(m.group(3)):
        raise CutSystemError(f"Invalid crossover formula: {text!r}")
    cones = [int(c) for c in re.findall(r"c([1-4])", m.group(2))]
    if m.group(4):
        return tuple((c, -1) for c in reversed(cones))
    return tuple((c, 1) for c in cones)


def spoke_permutation(opposite: Sequence[int]) -> tuple[int, ...]:
    n = len(opposite)
    return tuple((opposite[p] - 1) % n for p in range(n))


def _cycles(perm: Sequence[int]) -> set[tuple[int, ...]]:
    """Cycles of ``perm``, each rotated to start at its smallest position."""
    seen = set()
    cycles = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        p = perm[start]
        while p != start:
            cycle.append(p)
            seen.add(p)
            p = perm[p]
        cycles.add(tuple(cycle))
    return cycles


def _rotate_min(cycle: Sequence[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    return tuple(cycle[i:]) + tuple(cycle[:i])


def make_cut_system(cut_id: str) -> CutSystem:
    if cut_id not in CUT_TABLE:
        raise CutSystemError(f"Unknown cut system {cut_id!r} (known: {', '.join(CUT_IDS)})")
    edges, boundary, formulas, vertex_rows = CUT_TABLE[cut_id]
    k = len(edges)
    if len(boundary) != 2 * k or len(formulas) != 2 * k:
        raise CutSystemError(f"{cut_id}: boundary sequence must have length 2k = {2 * k}")
    position = {label: p for p, label in enumerate(boundary)}
    if len(position) != 2 * k:
        raise CutSystemError(f"{cut_id}: repeated oriented edge in boundary sequence")
    opposite = []
    for label in boundary:
        m = _EDGE_LABEL_RE.match(label)
        if not m or not 1 <= int(m.group(1)) <= k:
            raise CutSystemError(f"{cut_id}: invalid oriented edge {label!r}")
        flipped = f"e{m.group(1)}{'-' if m.group(2) == '+' else '+'}"
        if flipped not in position:
            raise CutSystemError(f"{cut_id}: {label} has no opposite in the boundary sequence")
        opposite.append(position[flipped])

    vertices = []
    for label, colour, cone, spoke_labels in vertex_rows:
        valency = sum(label in edge for edge in edges)
        if valency != len(spoke_labels):
            raise CutSystemError(f"{cut_id}: vertex {label} has valency {valency} but "
                                 f"{len(spoke_labels)} spokes")
        vertices.append(CutVertex(label, colour, cone, tuple(position[s] for s in spoke_labels)))

    expected = _cycles(spoke_permutation(opposite))
    given = {_rotate_min(v.spokes) for v in vertices}
    if given != expected or sum(len(v.spokes) for v in vertices) != 2 * k:
        raise CutSystemError(f"{cut_id}: spoke cycles do not match the boundary sequence")

    return CutSystem(
        id=cut_id,
        undirected_edges=tuple(edges),
        boundary_sequence=tuple(boundary),
        formulas=tuple(formulas),
        words=tuple(_parse_formula(f) for f in formulas),
        opposite=tuple(opposite),
        vertices=tuple(vertices),
    )


# ══════════════════════════════════════════════════════════════════
# Crossover sequences
# ══════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class CrossoverSequence:
    cut: str
    source_vector: tuple[int, ...]
    periods: tuple[int, ...]
    taus: tuple[int, ...]


def crossover_sequence(G: GroupTable, cut: CutSystem, vector: Sequence[int]) -> CrossoverSequence:
    taus = []
    for word in cut.words:
        tau = 0
        for cone, exponent in word:
            c = vector[cone - 1]
            tau = G.mul[tau][c if exponent == 1 else G.inv[c]]
        taus.append(tau)
    return CrossoverSequence(
        cut=cut.id,
        source_vector=tuple(vector),
        periods=tuple(G.elem_order[c] for c in vector),
        taus=tuple(taus),
    )


# ══════════════════════════════════════════════════════════════════
# Sector labelling and degeneracies
# ══════════════════════════════════════════════════════════════════


def vertex_period(cut: CutSystem, seq: CrossoverSequence, label: str) -> int:
    v = cut.vertex(label)
    return 1 if v.cone is None else seq.periods[v.cone - 1]


def spoke_product(G: GroupTable, cut: CutSystem, seq: CrossoverSequence, label: str, start: int = 0) -> int:
    """Product of the spoke crossovers around a vertex, starting at spoke ``start``."""
    spokes = cut.vertex(label).spokes
    product = 0
    for r in range(len(spokes)):
        product = G.mul[product][seq.taus[spokes[(start + r) % len(spokes)]]]
    return product


def sector_sequence(G: GroupTable, cut: CutSystem, seq: CrossoverSequence, label: str, h: int = 0) -> list[int]:
    """h, h t1, h t1 t2, ... around the vertex, repeated for m_v turns."""
    spokes = cut.vertex(label).spokes
    labels = []
    current = h
    for _ in range(vertex_period(cut, seq, label)):
        for p in spokes:
            labels.append(current)
            current = G.mul[current][seq.taus[p]]
    return labels


def validate_spoke_cycles(G: GroupTable, cut: CutSystem, seq: CrossoverSequence) -> bool:
    for v in cut.vertices:
        for start in range(len(v.spokes)):
            product = spoke_product(G, cut, seq, v.label, start)
            if v.colour == "white":
                if product != 0:
                    return False
            elif G.elem_order[product] != seq.periods[v.cone - 1]:
                return False
    return True


@dataclass(frozen=True)
class VertexCollapse:
    label: str
    collapsed: bool
    repeat: tuple[int, int] | None = None  # first two indices in the sector sequence with equal labels


@dataclass(frozen=True)
class DegeneracyReport:
    collapsed_edges: tuple[int, ...]
    multi_edge_groups: tuple[tuple[int, ...], ...]
    vertex_collapses: tuple[VertexCollapse, ...]

    @property
    def has_edge_collapse(self) -> bool:
        return bool(self.collapsed_edges)

    @property
    def multi_edge_shape(self) -> tuple[int, ...]:
        return tuple(sorted((len(g) for g in self.multi_edge_groups), reverse=True))


def _first_repeat(labels: Sequence[int]) -> tuple[int, int] | None:
    seen = {}
    for i, g in enumerate(labels):
        if g in seen:
            return (seen[g], i)
        seen[g] = i
    return None


def detect_degeneracies(G: GroupTable, cut: CutSystem, seq: CrossoverSequence) -> DegeneracyReport:
    collapsed = tuple(p for p, tau in enumerate(seq.taus) if tau == 0)
    groups = defaultdict(list)
    for p, tau in enumerate(seq.taus):
        if tau != 0:
            groups[tau].append(p)
    multi = tuple(sorted(tuple(ps) for ps in groups.values() if len(ps) >= 2))
    vertices = []
    for v in cut.vertices:
        repeat = _first_repeat(sector_sequence(G, cut, seq, v.label))
        vertices.append(VertexCollapse(v.label, repeat is not None, repeat))
    return DegeneracyReport(collapsed, multi, tuple(vertices))


@dataclass(frozen=True)
class FeatureSummary:
    collapse_count: int
    multi_edge_shape: tuple[int, ...]
    vertex_collapses: tuple[tuple[str, bool], ...]


def differentiating_features(G: GroupTable, cut: CutSystem, seq: CrossoverSequence) -> FeatureSummary:
    """Tiling features that must agree between conformally equivalent companions."""
    report = detect_degeneracies(G, cut, seq)
    return FeatureSummary(
        collapse_count=len(report.collapsed_edges),
        multi_edge_shape=report.multi_edge_shape,
        vertex_collapses=tuple((v.label, v.collapsed) for v in report.vertex_collapses),
    )


# ══════════════════════════════════════════════════════════════════
# Polygon export
# ══════════════════════════════════════════════════════════════════

PALETTE = ("blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta", "olive")


def polygon_dot(G: GroupTable, cut: CutSystem, seq: CrossoverSequence) -> str:
    """DOT drawing of the polygon boundary: edge labels e_j^+-, collapses red, multi-edges coloured."""
    report = detect_degeneracies(G, cut, seq)
    colour = {}
    for n, group in enumerate(report.multi_edge_groups):
        for p in group:
            colour[p] = PALETTE[n % len(PALETTE)]
    for p in report.collapsed_edges:
        colour[p] = "red"

    graph = pydot.Dot(graph_name=f"polygon_{cut.id}", graph_type="graph")
    size = len(cut.boundary_sequence)
    for corner in range(size):
        graph.add_node(pydot.Node(f"v{corner}", shape="point"))
    for p, label in enumerate(cut.boundary_sequence):
        tau = seq.taus[p]
        graph.add_edge(pydot.Edge(
            f"v{p}", f"v{(p + 1) % size}",
            label=f"{label}: {G.word_label(tau)}",
            color=colour.get(p, "black"),
        ))
    return graph.to_string()
