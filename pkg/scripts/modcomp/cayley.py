"""Modified group Cayley graph Cay(G, E, Sigma).

Nodes are the group elements (polygon labels); for every boundary position p
of the cut system and every g there is a typed directed edge

    (p, g, g * tau_p)

stored in a networkx MultiDiGraph under key p. Multi-edges are kept, loops
are refused: a trivial crossover is an edge collapse and the modified graph
no longer matches the tiling's dual graph.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .errors import EdgeCollapseError
from .groups import GroupTable
from .tiling import PALETTE, CrossoverSequence, CutSystem, detect_degeneracies

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class TypedEdge:
    position: int
    src: int
    dst: int

    def opposite(self, cut: CutSystem) -> "TypedEdge":
        return TypedEdge(cut.opposite[self.position], self.dst, self.src)


def edge_colour(cut: CutSystem, position: int) -> str:
    """e and e^op share a colour; colours follow the undirected edge index."""
    index = int(cut.boundary_sequence[position][1:-1]) - 1
    return PALETTE[index % len(PALETTE)]


@dataclass(frozen=True)
class ModifiedCayleyGraph:
    group: GroupTable
    cut: CutSystem
    source: CrossoverSequence
    graph: nx.MultiDiGraph

    def edges(self) -> list[TypedEdge]:
        return sorted(TypedEdge(key, u, v) for u, v, key in self.graph.edges(keys=True))

    def out_edges(self, node: int) -> list[TypedEdge]:
        return sorted(TypedEdge(key, u, v) for u, v, key in self.graph.out_edges(node, keys=True))

    def is_connected(self) -> bool:
        return nx.is_strongly_connected(self.graph)

    def left_translate(self, g: int) -> "ModifiedCayleyGraph":
        """Relabel every node h as g*h."""
        mapping = {h: self.group.mul[g][h] for h in self.graph.nodes}
        return ModifiedCayleyGraph(self.group, self.cut, self.source,
                                   nx.relabel_nodes(self.graph, mapping, copy=True))


def build_graph(G: GroupTable, cut: CutSystem, seq: CrossoverSequence) -> ModifiedCayleyGraph:
    report = detect_degeneracies(G, cut, seq)
    if report.has_edge_collapse:
        labels = ", ".join(cut.boundary_sequence[p] for p in report.collapsed_edges)
        raise EdgeCollapseError(
            f"{cut.id} has an edge collapse for {seq.source_vector} (trivial crossover at {labels})",
            report,
        )
    graph = nx.MultiDiGraph(cut=cut.id)
    for g in range(G.order):
        graph.add_node(g, label=G.word_label(g))
    for g in range(G.order):
        row = G.mul[g]
        for p, tau in enumerate(seq.taus):
            graph.add_edge(g, row[tau], key=p, label=cut.boundary_sequence[p],
                           color=edge_colour(cut, p))
    logger.debug("%s graph for %s: %d nodes, %d edges", cut.id, seq.source_vector,
                 graph.number_of_nodes(), graph.number_of_edges())
    return ModifiedCayleyGraph(G, cut, seq, graph)


@dataclass(frozen=True)
class GraphFingerprint:
    multiplicities: tuple[int, ...]
    collapse_count: int
    multi_edge_shape: tuple[int, ...]
    vertex_collapses: tuple[tuple[str, bool], ...]


def graph_fingerprint(cay: ModifiedCayleyGraph) -> GraphFingerprint:
    """Canonical summary; equal fingerprints are necessary for a patch seed map to exist."""
    shapes = set()
    for node in cay.graph.nodes:
        counts = Counter(v for _, v in cay.graph.out_edges(node))
        shapes.add(tuple(sorted(counts.values(), reverse=True)))
    if len(shapes) != 1:
        raise RuntimeError("Out-edge multiplicities differ between nodes; graph is not a Cayley graph")
    multiplicities = shapes.pop()
    report = detect_degeneracies(cay.group, cay.cut, cay.source)
    return GraphFingerprint(
        multiplicities=multiplicities,
        collapse_count=nx.number_of_selfloops(cay.graph),
        multi_edge_shape=tuple(m for m in multiplicities if m >= 2),
        vertex_collapses=tuple((v.label, v.collapsed) for v in report.vertex_collapses),
    )


def to_dot(cay: ModifiedCayleyGraph) -> str:
    dot = nx.nx_pydot.to_pydot(cay.graph)
    dot.set_name(f"cayley_{cay.cut.id}")
    return dot.to_string()


def to_adjacency(cay: ModifiedCayleyGraph) -> dict[str, list[list]]:
    """node id -> [[edge label, dst], ...] in boundary order."""
    adjacency = {}
    for node in sorted(cay.graph.nodes):
        adjacency[str(node)] = [[cay.cut.boundary_sequence[e.position], e.dst]
                                for e in cay.out_edges(node)]
    return adjacency
