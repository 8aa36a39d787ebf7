"""Induced squares, square-chain graphs and the CFS property."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations

from scipy.cluster.hierarchy import DisjointSet

from .graph_core import Graph, VertexSet, iter_bits


class ChainMode(str, Enum):
    SHARE3 = "share3"
    DIAGONAL = "diagonal"


class CfsFailure(str, Enum):
    UNCOVERED_VERTEX = "uncovered_vertex"
    DISCONNECTED_SUPPORT = "disconnected_support"


@dataclass(frozen=True, order=True)
class Square:
    """An induced 4-cycle ``(c0, c1, c2, c3)`` in canonical order.

    ``c0`` is the smallest index and ``c1 < c3``, which is the lexicographically
    least rotation or reflection.  The diagonals are ``{c0, c2}`` and ``{c1, c3}``.
    """

    cycle: tuple[int, int, int, int]

    @property
    def mask(self) -> int:
        c = self.cycle
        return 1 << c[0] | 1 << c[1] | 1 << c[2] | 1 << c[3]

    @property
    def diagonals(self) -> tuple[tuple[int, int], tuple[int, int]]:
        c = self.cycle
        return (min(c[0], c[2]), max(c[0], c[2])), (c[1], c[3])

    def triples(self) -> list[tuple[int, ...]]:
        return list(combinations(sorted(self.cycle), 3))

    def names(self, g: Graph) -> tuple[str, ...]:
        return tuple(g.names[i] for i in self.cycle)


def canonical_square(a: int, b: int, c: int, d: int) -> Square:
    """Canonical form of the 4-cycle visiting ``a, b, c, d`` in that order."""
    cyc = (a, b, c, d)
    variants = []
    for k in range(4):
        rot = cyc[k:] + cyc[:k]
        variants.append(rot)
        variants.append((rot[0],) + tuple(reversed(rot[1:])))
    return Square(min(variants))


def enumerate_induced_squares(g: Graph) -> list[Square]:
    """All induced squares, each once, sorted by canonical cycle.

    Runs over candidate diagonals ``{x, y}`` (non-adjacent) and non-adjacent
    pairs in their common link.  A square is emitted from the diagonal holding
    its smallest vertex.
    """
    rows = g.rows
    out = []
    for x in range(g.n):
        above_x = ~((1 << (x + 1)) - 1)
        for y in iter_bits(g.full_mask & above_x & ~rows[x]):
            common = rows[x] & rows[y] & above_x
            for z in iter_bits(common):
                for w in iter_bits(common & ~rows[z] & ~((1 << (z + 1)) - 1)):
                    out.append(Square((x, z, y, w)))
    out.sort()
    return out


class SquareChainGraph:
    """Squares as nodes, linked when they share three vertices or a diagonal."""

    def __init__(self, graph: Graph, nodes: list[Square], mode: ChainMode):
        self.graph = graph
        self.nodes = nodes
        self.mode = ChainMode(mode)
        self._buckets: dict[tuple[int, ...], list[int]] = defaultdict(list)
        for k, sq in enumerate(nodes):
            keys = sq.triples() if self.mode is ChainMode.SHARE3 else sq.diagonals
            for key in keys:
                self._buckets[key].append(k)
        ds = DisjointSet(range(len(nodes)))
        for members in self._buckets.values():
            for k in members[1:]:
                ds.merge(members[0], k)
        comps = sorted((sorted(s) for s in ds.subsets()), key=lambda c: c[0])
        self.components: list[list[int]] = comps

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        # distinct squares never share all four vertices, so no pair repeats across buckets
        pairs = set()
        for members in self._buckets.values():
            pairs.update(combinations(members, 2))
        return sorted(pairs)

    @cached_property
    def support(self) -> list[int]:
        out = []
        for comp in self.components:
            mask = 0
            for k in comp:
                mask |= self.nodes[k].mask
            out.append(mask)
        return out

    def support_set(self, component: int) -> VertexSet:
        return VertexSet(self.graph, self.support[component])

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def to_document(self) -> dict:
        labels = [",".join(sq.names(self.graph)) for sq in self.nodes]
        return {
            "vertices": labels,
            "edges": [[labels[i], labels[j]] for i, j in self.edges],
            "mode": self.mode.value,
        }


def square_chain_graph(g: Graph, mode: ChainMode | str = ChainMode.DIAGONAL,
                       squares: list[Square] | None = None) -> SquareChainGraph:
    if squares is None:
        squares = enumerate_induced_squares(g)
    return SquareChainGraph(g, squares, ChainMode(mode))


@dataclass(frozen=True)
class CfsReport:
    holds: bool
    mode: ChainMode
    clique_factor: VertexSet
    witness_component: int | None
    failure_reason: CfsFailure | None
    square_count: int
    uncovered: VertexSet

    @property
    def summary(self) -> str:
        if self.holds:
            return f"CFS ({self.mode.value})"
        if self.square_count == 0:
            return "not CFS: no induced squares"
        if self.failure_reason is CfsFailure.UNCOVERED_VERTEX:
            return f"not CFS: {', '.join(self.uncovered.names)} in no induced square"
        return "not CFS: no square component has full support"

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "mode": self.mode.value,
            "clique_factor": list(self.clique_factor.names),
            "witness_component": self.witness_component,
            "failure_reason": None if self.failure_reason is None else self.failure_reason.value,
            "square_count": self.square_count,
            "uncovered": list(self.uncovered.names),
        }


def is_cfs(g: Graph, mode: ChainMode | str = ChainMode.DIAGONAL,
           chain: SquareChainGraph | None = None) -> CfsReport:
    """Decide CFS after stripping cone vertices into a clique factor.

    Holds when some component of the chain graph has support equal to every
    non-cone vertex.  A graph made only of cone vertices holds vacuously.
    """
    mode = ChainMode(mode)
    cone = g.cone_mask()
    target = g.full_mask & ~cone
    if chain is None or chain.mode is not mode:
        chain = square_chain_graph(g, mode)
    covered = 0
    for sq in chain.nodes:
        covered |= sq.mask
    witness = None
    if target == 0:
        failure = None
    else:
        for k, supp in enumerate(chain.support):
            if supp == target:
                witness = k
                break
        if witness is not None:
            failure = None
        elif target & ~covered:
            failure = CfsFailure.UNCOVERED_VERTEX
        else:
            failure = CfsFailure.DISCONNECTED_SUPPORT
    return CfsReport(
        holds=failure is None,
        mode=mode,
        clique_factor=VertexSet(g, cone),
        witness_component=witness,
        failure_reason=failure,
        square_count=len(chain.nodes),
        uncovered=VertexSet(g, target & ~covered),
    )
