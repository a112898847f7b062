"""Small immutable digraphs plus the few graph algorithms the spectral code needs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx


@dataclass(frozen=True)
class Digraph:
    nodes: frozenset
    arcs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for i, j in self.arcs:
            if i not in self.nodes or j not in self.nodes:
                raise ValueError(f"arc ({i}, {j}) has an endpoint outside the node set")

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int]], nodes: Iterable[int] = ()) -> "Digraph":
        arcs = frozenset(arcs)
        ns = set(nodes)
        for i, j in arcs:
            ns.update((i, j))
        return cls(frozenset(ns), arcs)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.arcs)
        return g

    def successors(self, i) -> list:
        return sorted(j for (a, j) in self.arcs if a == i)

    def restrict(self, nodes: Iterable) -> "Digraph":
        keep = frozenset(nodes) & self.nodes
        return Digraph(keep, frozenset((i, j) for i, j in self.arcs if i in keep and j in keep))

    def issubgraph(self, other: "Digraph") -> bool:
        return self.nodes <= other.nodes and self.arcs <= other.arcs

    def union(self, other: "Digraph") -> "Digraph":
        return Digraph(self.nodes | other.nodes, self.arcs | other.arcs)

    def sorted_arcs(self) -> list[tuple]:
        return sorted(self.arcs)

    def to_dot(self, name: str = "G", one_based: bool = True) -> str:
        off = 1 if one_based else 0
        lines = [f"digraph {name} {{"]
        for v in sorted(self.nodes):
            lines.append(f"  {v + off};")
        for i, j in self.sorted_arcs():
            lines.append(f"  {i + off} -> {j + off};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def sccs(g: Digraph) -> list[frozenset]:
    """Strongly connected components, ordered by smallest member."""
    comps = [frozenset(c) for c in nx.strongly_connected_components(g.to_networkx())]
    return sorted(comps, key=min)


def final_classes(g: Digraph) -> list[frozenset]:
    """Components with no outgoing arc that every node of ``g`` can reach."""
    G = g.to_networkx()
    out = []
    for comp in sccs(g):
        if any(j not in comp for i in comp for j in G.successors(i)):
            continue
        target = next(iter(comp))
        reach = nx.ancestors(G, target) | {target}
        if reach >= g.nodes:
            out.append(comp)
    return out


def has_disjoint_circuit_cover(g: Digraph) -> bool:
    """True iff node-disjoint circuits (loops included) cover every node.

    Equivalent to a perfect matching between out-copies and in-copies of the
    nodes along the arcs of ``g``.  The empty graph is covered by convention.
    """
    if not g.nodes:
        return True
    B = nx.Graph()
    left = [("out", v) for v in g.nodes]
    B.add_nodes_from(left, bipartite=0)
    B.add_nodes_from((("in", v) for v in g.nodes), bipartite=1)
    B.add_edges_from((("out", i), ("in", j)) for i, j in g.arcs)
    matching = nx.bipartite.hopcroft_karp_matching(B, top_nodes=left)
    return sum(1 for k in matching if k[0] == "out") == len(g.nodes)
