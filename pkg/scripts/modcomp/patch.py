"""Partial isometries between two surfaces over the same quotient.

Tiles of surface 1 are grown from the seed polygon 1 and matched into
surface 2 by an injective label map w with w(1) = 1. A polygon h = g*tau_{e,1}
across a boundary edge is accepted with w(h) = w(g)*tau_{e,2} when w stays
injective and every edge (e', g', h) from the current patch satisfies the
continuity criterion

    w(g' * tau_{e',1}) == w(g') * tau_{e',2}

Lists are kept in insertion order; removals keep the order of the rest.
Selection takes the first boundary edge (cayley distance) or a uniformly
random one from a seeded generator. A complete patch (H = G) is an
automorphism of G.

Matrix entry [i][j] is the patch grown on the surface of class j and matched
into the surface of class i.
"""

from __future__ import annotations

import enum
import itertools
import logging
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .cayley import TypedEdge
from .errors import EdgeCollapseError, ModcompError, PatchInputError
from .genvec import Signature, VectorClass
from .groups import GroupTable
from .tiling import CrossoverSequence, CutSystem, crossover_sequence, detect_degeneracies

logger = logging.getLogger(__name__)


class Selection(str, enum.Enum):
    CAYLEY = "cayley"
    RANDOM = "random"


@dataclass
class PatchState:
    H: list[int]
    w: dict[int, int]
    wH: list[int]
    int_edges_1: list[TypedEdge] = field(default_factory=list)
    int_edges_2: list[TypedEdge] = field(default_factory=list)
    boundary_edges_1: list[TypedEdge] = field(default_factory=list)
    bad_edges_1: list[TypedEdge] = field(default_factory=list)

    @classmethod
    def seed(cls, taus: Sequence[int]) -> "PatchState":
        return cls(H=[0], w={0: 0}, wH=[0],
                   boundary_edges_1=[TypedEdge(p, 0, tau) for p, tau in enumerate(taus)])


@dataclass(frozen=True)
class PatchResult:
    H: tuple[int, ...]
    w: Mapping[int, int]
    size: int
    complete: bool
    selection: Selection
    seed: int | None
    iterations: int
    interior_edges: int
    bad_edges: int


def _check_inputs(G: GroupTable, cut: CutSystem, seq1: CrossoverSequence, seq2: CrossoverSequence):
    if seq1.cut != cut.id or seq2.cut != cut.id:
        raise PatchInputError(f"Crossover sequences from {seq1.cut}/{seq2.cut}, expected {cut.id}")
    if seq1.periods != seq2.periods:
        raise PatchInputError(f"Signatures differ: {seq1.periods} vs {seq2.periods}")
    for seq in (seq1, seq2):
        report = detect_degeneracies(G, cut, seq)
        if report.has_edge_collapse:
            raise EdgeCollapseError(f"{cut.id} has an edge collapse for {seq.source_vector}", report)


def _check_state(G: GroupTable, cut: CutSystem, state: PatchState, t1, t2) -> None:
    if state.w.get(0) != 0 or state.H[0] != 0:
        raise RuntimeError("patch lost its seed polygon")
    if len(set(state.wH)) != len(state.H) or set(state.wH) != set(state.w.values()):
        raise RuntimeError("patch map is not injective")
    for e in state.int_edges_1:
        if state.w[e.dst] != G.mul[state.w[e.src]][t2[e.position]]:
            raise RuntimeError(f"continuity fails on interior edge {e}")
    lists = (state.int_edges_1, state.boundary_edges_1, state.bad_edges_1)
    for a, b in itertools.combinations(lists, 2):
        if set(a) & set(b):
            raise RuntimeError("interior, boundary and bad edge lists overlap")


def grow_patch(
    G: GroupTable,
    cut: CutSystem,
    seq1: CrossoverSequence,
    seq2: CrossoverSequence,
    selection: Selection | str = Selection.CAYLEY,
    seed: int | None = None,
    check: bool = False,
) -> PatchResult:
    """Grow a maximal patch on surface 1 matched into surface 2."""
    selection = Selection(selection)
    if selection == Selection.RANDOM and seed is None:
        raise PatchInputError("random selection needs a seed")
    _check_inputs(G, cut, seq1, seq2)

    mul = G.mul
    t1, t2 = seq1.taus, seq2.taus
    op = cut.opposite
    size = len(t1)
    rng = random.Random(seed) if selection == Selection.RANDOM else None

    state = PatchState.seed(t1)
    in_h = {0}
    used = {0}
    iterations = 0
    while state.boundary_edges_1:
        iterations += 1
        index = 0 if rng is None else rng.randrange(len(state.boundary_edges_1))
        edge = state.boundary_edges_1[index]
        g, h = edge.src, edge.dst
        test = mul[state.w[g]][t2[edge.position]]

        incoming = []
        for q in range(size):
            src = mul[h][t1[op[q]]]
            if src in in_h:
                incoming.append(TypedEdge(q, src, h))
        ok = test not in used and all(mul[state.w[e.src]][t2[e.position]] == test for e in incoming)

        if ok:
            state.H.append(h)
            state.w[h] = test
            state.wH.append(test)
            in_h.add(h)
            used.add(test)
            for e in incoming:
                back = e.opposite(cut)
                state.int_edges_1.extend((e, back))
                image = TypedEdge(e.position, state.w[e.src], test)
                state.int_edges_2.extend((image, image.opposite(cut)))
            state.boundary_edges_1 = [b for b in state.boundary_edges_1 if b.dst != h]
            start = op[edge.position]
            for r in range(size):
                q = (start + r) % size
                dst = mul[h][t1[q]]
                if dst not in in_h:
                    state.boundary_edges_1.append(TypedEdge(q, h, dst))
            logger.debug("added %d as %d (|H| = %d)", h, test, len(state.H))
        else:
            state.bad_edges_1.extend(b for b in state.boundary_edges_1 if b.dst == h)
            state.boundary_edges_1 = [b for b in state.boundary_edges_1 if b.dst != h]
        if check:
            _check_state(G, cut, state, t1, t2)

    return PatchResult(
        H=tuple(state.H),
        w=dict(state.w),
        size=len(state.H),
        complete=len(state.H) == G.order,
        selection=selection,
        seed=seed,
        iterations=iterations,
        interior_edges=len(state.int_edges_1),
        bad_edges=len(state.bad_edges_1),
    )


def verify_patch(
    G: GroupTable,
    cut: CutSystem,
    result: PatchResult,
    seq1: CrossoverSequence,
    seq2: CrossoverSequence,
) -> bool:
    """Independent re-check of a patch: seed, injectivity, continuity, connectivity, completeness."""
    H = set(result.H)
    w = result.w
    if 0 not in H or w.get(0) != 0 or set(w) != H or len(H) != len(result.H):
        return False
    if len(set(w.values())) != len(w):
        return False
    interior = nx.Graph()
    interior.add_nodes_from(H)
    for g in H:
        for p, tau in enumerate(seq1.taus):
            dst = G.mul[g][tau]
            if dst not in H:
                continue
            if w[dst] != G.mul[w[g]][seq2.taus[p]]:
                return False
            interior.add_edge(g, dst)
    if not nx.is_connected(interior):
        return False
    if len(H) == G.order:
        return all(w[G.mul[a][b]] == G.mul[w[a]][w[b]] for a in range(G.order) for b in range(G.order))
    return True


def seed_compatible(seq1: CrossoverSequence, seq2: CrossoverSequence) -> bool:
    """tau_{j,1} -> tau_{j,2}, 1 -> 1 is a well-defined bijection."""
    pairs = {(0, 0)} | set(zip(seq1.taus, seq2.taus))
    forward = {}
    backward = {}
    for a, b in pairs:
        if forward.setdefault(a, b) != b or backward.setdefault(b, a) != a:
            return False
    return True


@dataclass(frozen=True)
class PatchSample:
    seeds: tuple[int, ...]
    sizes: tuple[int, ...]

    @property
    def minimum(self) -> int:
        return min(self.sizes)

    @property
    def maximum(self) -> int:
        return max(self.sizes)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.sizes)

    @property
    def distinct(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.sizes)))


def sample_patches(
    G: GroupTable,
    cut: CutSystem,
    seq1: CrossoverSequence,
    seq2: CrossoverSequence,
    seeds: Iterable[int],
) -> PatchSample:
    seeds = tuple(seeds)
    if not seeds:
        raise PatchInputError("sampling needs at least one seed")
    sizes = tuple(grow_patch(G, cut, seq1, seq2, Selection.RANDOM, seed).size for seed in seeds)
    return PatchSample(seeds, sizes)


@dataclass(frozen=True)
class IsometryMatrix:
    labels: tuple[int, ...]
    entries: tuple[tuple[int | None, ...], ...]
    compatible: tuple[tuple[bool | None, ...], ...]
    flags: tuple[str, ...]
    samples: Mapping[tuple[int, int], PatchSample] | None = None


def isometry_matrix(
    G: GroupTable,
    s: Signature,
    cut: CutSystem,
    classes: Sequence[VectorClass],
    selection: Selection | str = Selection.CAYLEY,
    seed: int | None = None,
    threads: int = 1,
    samples: int = 0,
) -> IsometryMatrix:
    """Patch sizes for every ordered pair of class representatives.

    entries[i][j] is grow_patch(seq_j, seq_i): grown on class j, matched into class i.
    """
    selection = Selection(selection)
    flags = []
    seqs = {}
    for cls in classes:
        rep = cls.representative
        if tuple(G.elem_order[c] for c in rep) != s.periods:
            raise PatchInputError(f"class {cls.class_index} does not have signature {s}")
        seq = crossover_sequence(G, cut, rep)
        if detect_degeneracies(G, cut, seq).has_edge_collapse:
            flags.append(f"class {cls.class_index}: edge collapse on {cut.id}, row and column left empty")
            continue
        seqs[cls.class_index] = seq

    labels = tuple(cls.class_index for cls in classes)
    pairs = [(i, j) for i in labels for j in labels if i in seqs and j in seqs]

    def entry(pair):
        i, j = pair
        try:
            result = grow_patch(G, cut, seqs[j], seqs[i], selection, seed)
        except ModcompError as exc:
            return pair, None, str(exc)
        if not verify_patch(G, cut, result, seqs[j], seqs[i]):
            raise RuntimeError(f"patch for entry [{i}][{j}] fails verification")
        return pair, result.size, None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            computed = list(pool.map(entry, pairs))
    else:
        computed = [entry(pair) for pair in pairs]

    sizes = {}
    for pair, size, error in computed:
        sizes[pair] = size
        if error:
            flags.append(f"entry [{pair[0]}][{pair[1]}]: {error}")
    for i in seqs:
        if sizes.get((i, i)) != G.order:
            raise RuntimeError(f"diagonal entry [{i}][{i}] is {sizes.get((i, i))}, expected {G.order}")

    sampled = None
    if samples > 0:
        sampled = {(i, j): sample_patches(G, cut, seqs[j], seqs[i], range(samples)) for i, j in pairs}

    entries = tuple(tuple(sizes.get((i, j)) for j in labels) for i in labels)
    compatible = tuple(
        tuple(seed_compatible(seqs[j], seqs[i]) if i in seqs and j in seqs else None for j in labels)
        for i in labels
    )
    logger.info("%s %s %s: %dx%d matrix", G.name, s, cut.id, len(labels), len(labels))
    return IsometryMatrix(labels, entries, compatible, tuple(flags), sampled)
