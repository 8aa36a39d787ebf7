"""Brute-force reference implementations used only by the tests.

These work on plain edge sets rather than the bit-row representation so they
stay independent of the code under test.
"""

from __future__ import annotations

from itertools import combinations, product

import networkx as nx
from networkx.utils import UnionFind

from racgkit.graph_core import Graph


def edge_set(g: Graph) -> set[frozenset[str]]:
    return {frozenset(e) for e in g.edge_names()}


def adj_fn(g: Graph):
    edges = edge_set(g)
    return lambda x, y: frozenset((x, y)) in edges


def squares_by_subsets(g: Graph) -> set[frozenset[str]]:
    """Vertex sets of induced 4-cycles, by checking every 4-subset."""
    adj = adj_fn(g)
    out = set()
    for quad in combinations(g.names, 4):
        pairs = [p for p in combinations(quad, 2) if adj(*p)]
        if len(pairs) != 4:
            continue
        degrees = {v: sum(v in p for p in pairs) for v in quad}
        if all(d == 2 for d in degrees.values()):
            out.add(frozenset(quad))
    return out


def complement_connected_uf(g: Graph) -> bool:
    """Connectivity of the complement via union-find over non-edges."""
    adj = adj_fn(g)
    uf = UnionFind(g.names)
    for x, y in combinations(g.names, 2):
        if not adj(x, y):
            uf.union(x, y)
    return len(list(uf.to_sets())) <= 1


def nondegenerate_join_by_bipartition(g: Graph) -> bool:
    """Some split of the whole vertex set into A, B with all cross pairs adjacent
    and a non-adjacent pair on each side."""
    adj = adj_fn(g)
    names = list(g.names)
    for labels in product((0, 1), repeat=len(names) - 1):
        side = dict(zip(names, (0,) + labels))
        a = [v for v in names if side[v] == 0]
        b = [v for v in names if side[v] == 1]
        if not b:
            continue
        if not all(adj(x, y) for x in a for y in b):
            continue
        if any(not adj(*p) for p in combinations(a, 2)) and any(
            not adj(*p) for p in combinations(b, 2)
        ):
            return True
    return False


def common_join_by_assignment(g: Graph, u: str, v: str) -> bool:
    """Assign every vertex to outside/A/B and test the join conditions."""
    adj = adj_fn(g)
    names = list(g.names)
    for labels in product((0, 1, 2), repeat=len(names)):
        lab = dict(zip(names, labels))
        if lab[u] == 0 or lab[v] == 0:
            continue
        a = [x for x in names if lab[x] == 1]
        b = [x for x in names if lab[x] == 2]
        if not a or not b:
            continue
        if not all(adj(x, y) for x in a for y in b):
            continue
        if any(not adj(*p) for p in combinations(a, 2)) and any(
            not adj(*p) for p in combinations(b, 2)
        ):
            return True
    return False


def induced_cycles_by_subsets(g: Graph, min_len: int = 5) -> list[tuple[str, ...]]:
    """Vertex sets spanning induced cycles of length at least ``min_len``."""
    G = nx.Graph()
    G.add_nodes_from(g.names)
    G.add_edges_from(g.edge_names())
    out = []
    for k in range(min_len, g.n + 1):
        for subset in combinations(g.names, k):
            H = G.subgraph(subset)
            if all(d == 2 for _, d in H.degree()) and nx.is_connected(H):
                out.append(subset)
    return out


def stable_witness_exists(g: Graph, min_len: int = 5) -> bool:
    """Exhaustive: some induced cycle with no non-adjacent pair in a common join.

    Non-adjacent ``x, y`` lie in a common join iff two non-adjacent vertices
    are both adjacent to ``x`` and ``y``; checked here with explicit loops.
    """
    adj = adj_fn(g)

    def joined(x, y):
        cl = [z for z in g.names if z not in (x, y) and adj(x, z) and adj(y, z)]
        return any(not adj(*p) for p in combinations(cl, 2))

    for cyc in induced_cycles_by_subsets(g, min_len):
        if not any(joined(x, y) for x, y in combinations(cyc, 2) if not adj(x, y)):
            return True
    return False


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` vertices."""
    names = [f"x{i}" for i in range(n)]
    pairs = list(combinations(names, 2))
    for bits in range(1 << len(pairs)):
        yield Graph.from_edges(names, [p for k, p in enumerate(pairs) if bits >> k & 1])
