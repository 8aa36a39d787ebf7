"""Immutable simple graphs backed by packed bit rows.

Each vertex ``i`` owns an integer ``rows[i]`` whose bit ``j`` is set iff
``i`` and ``j`` are adjacent.  Python integers give arbitrary width, so set
operations on neighbourhoods are word-parallel for any vertex count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

Vertex = Union[str, int]


class GraphError(ValueError):
    """Raised for malformed graphs or references to unknown vertices."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def has_nonadjacent_pair(g: "Graph", mask: int) -> bool:
    """True iff the vertices in ``mask`` are not pairwise adjacent."""
    return find_nonadjacent_pair(g, mask) is not None


def find_nonadjacent_pair(g: "Graph", mask: int) -> tuple[int, int] | None:
    """Lexicographically least non-adjacent pair inside ``mask``, if any."""
    rest = mask
    for x in iter_bits(mask):
        rest &= ~(1 << x)
        miss = rest & ~g.rows[x]
        if miss:
            return x, (miss & -miss).bit_length() - 1
    return None


class Graph:
    """Finite simple graph on named vertices with a fixed vertex order."""

    def __init__(self, names: Sequence[str], rows: Sequence[int]):
        self.names: tuple[str, ...] = tuple(names)
        self.rows: tuple[int, ...] = tuple(rows)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise GraphError("duplicate vertex name")

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(cls, names: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Graph":
        names = list(names)
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise GraphError(f"invalid vertex name {name!r}")
            if name in index:
                raise GraphError(f"duplicate vertex name {name!r}")
            index[name] = i
        rows = [0] * len(names)
        for x, y in edges:
            if x not in index:
                raise GraphError(f"unknown vertex {x!r}")
            if y not in index:
                raise GraphError(f"unknown vertex {y!r}")
            if x == y:
                raise GraphError(f"self-loop at {x!r}")
            i, j = index[x], index[y]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(names, rows)

    # -- basic queries --------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def index(self, v: Vertex) -> int:
        if isinstance(v, str):
            try:
                return self._index[v]
            except KeyError:
                raise GraphError(f"unknown vertex {v!r}") from None
        if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < self.n:
            return v
        raise GraphError(f"unknown vertex {v!r}")

    def mask_of(self, vertices: Iterable[Vertex]) -> int:
        mask = 0
        for v in vertices:
            mask |= 1 << self.index(v)
        return mask

    def adjacent(self, u: Vertex, v: Vertex) -> bool:
        return bool(self.rows[self.index(u)] >> self.index(v) & 1)

    def degree(self, v: Vertex) -> int:
        return self.rows[self.index(v)].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edges as index pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
        out = []
        for i, row in enumerate(self.rows):
            for j in iter_bits(row >> (i + 1)):
                out.append((i, i + 1 + j))
        return out

    def edge_names(self) -> list[tuple[str, str]]:
        return [(self.names[i], self.names[j]) for i, j in self.edges()]

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in iter_bits(mask))

    def is_clique(self, mask: int | None = None) -> bool:
        mask = self.full_mask if mask is None else mask
        return not has_nonadjacent_pair(self, mask)

    def cone_mask(self) -> int:
        """Vertices adjacent to every other vertex."""
        full = self.full_mask
        mask = 0
        for i, row in enumerate(self.rows):
            if row | (1 << i) == full:
                mask |= 1 << i
        return mask

    def components(self, mask: int | None = None) -> list[int]:
        """Connected components (as masks) of the subgraph induced on ``mask``."""
        remaining = self.full_mask if mask is None else mask
        out = []
        while remaining:
            seed = remaining & -remaining
            comp = frontier = seed
            while frontier:
                reach = 0
                for i in iter_bits(frontier):
                    reach |= self.rows[i]
                frontier = reach & remaining & ~comp
                comp |= frontier
            out.append(comp)
            remaining &= ~comp
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    # -- equality, hashing, serialization ---------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.names == other.names and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.names, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    @cached_property
    def digest(self) -> str:
        """SHA-256 of the canonical text serialization."""
        return hashlib.sha256(to_text(self).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class VertexSet:
    """A set of vertices of ``graph`` iterated in the graph's vertex order."""

    graph: Graph
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.graph.n:
            raise GraphError("vertex index out of range")

    @classmethod
    def of(cls, graph: Graph, vertices: Iterable[Vertex]) -> "VertexSet":
        return cls(graph, graph.mask_of(vertices))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: object) -> bool:
        try:
            return bool(self.mask >> self.graph.index(v) & 1)  # type: ignore[arg-type]
        except GraphError:
            return False

    @property
    def names(self) -> tuple[str, ...]:
        return self.graph.names_of(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(self.names) + "}"


@dataclass(frozen=True)
class JoinDecomposition:
    parts: tuple[VertexSet, ...]
    is_join: bool
    is_nondegenerate_join: bool
    witness_split: tuple[VertexSet, VertexSet] | None

    def to_dict(self) -> dict:
        return {
            "parts": [list(p.names) for p in self.parts],
            "is_join": self.is_join,
            "is_nondegenerate_join": self.is_nondegenerate_join,
            "witness_split": None if self.witness_split is None
            else [list(s.names) for s in self.witness_split],
        }


def build_graph(vertex_names: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
    """Build a graph from vertex names and name pairs; duplicate edges collapse."""
    return Graph.from_edges(vertex_names, edges)


def link(g: Graph, v: Vertex) -> VertexSet:
    return VertexSet(g, g.rows[g.index(v)])


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.names, [full & ~row & ~(1 << i) for i, row in enumerate(g.rows)])


def induced_subgraph(g: Graph, s: VertexSet | int | Iterable[Vertex]) -> Graph:
    """Subgraph induced on ``s``; vertex order is inherited from ``g``."""
    if isinstance(s, VertexSet):
        mask = s.mask
    elif isinstance(s, int):
        mask = s
    else:
        mask = g.mask_of(s)
    if mask < 0 or mask >> g.n:
        raise GraphError("vertex index out of range")
    keep = list(iter_bits(mask))
    pos = {old: new for new, old in enumerate(keep)}
    rows = []
    for old in keep:
        row = 0
        for j in iter_bits(g.rows[old] & mask):
            row |= 1 << pos[j]
        rows.append(row)
    return Graph([g.names[i] for i in keep], rows)


def join_decomposition(g: Graph) -> JoinDecomposition:
    """Split ``g`` along the connected components of its complement.

    A part counts as having diameter at least 2 when it contains a pair of
    vertices non-adjacent in ``g``; for complement components that is the
    same as having at least two vertices.
    """
    if g.n == 0:
        raise GraphError("join decomposition of the empty graph")
    parts = complement(g).components()
    big = [p for p in parts if has_nonadjacent_pair(g, p)]
    split = None
    if len(big) >= 2:
        side_a = big[0]
        split = (VertexSet(g, side_a), VertexSet(g, g.full_mask & ~side_a))
    return JoinDecomposition(
        parts=tuple(VertexSet(g, p) for p in parts),
        is_join=len(parts) >= 2,
        is_nondegenerate_join=split is not None,
        witness_split=split,
    )


def is_join(g: Graph) -> bool:
    return join_decomposition(g).is_join


def is_nondegenerate_join(g: Graph) -> bool:
    return join_decomposition(g).is_nondegenerate_join


def is_induced_cycle(g: Graph, seq: Sequence[Vertex]) -> bool:
    """True iff ``seq`` (read cyclically) spans an induced cycle of ``g``."""
    idx = [g.index(v) for v in seq]
    if len(set(idx)) != len(idx):
        raise GraphError("repeated vertex in cycle")
    if len(idx) < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    mask = g.mask_of(idx)
    k = len(idx)
    for pos, v in enumerate(idx):
        expected = (1 << idx[pos - 1]) | (1 << idx[(pos + 1) % k])
        if g.rows[v] & mask != expected:
            return False
    return True


# -- file formats --------------------------------------------------------------


def to_text(g: Graph) -> str:
    lines = []
    for name in g.names:
        if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
            raise GraphError(f"vertex name {name!r} is not representable in text format")
        lines.append(f"v {name}")
    lines.extend(f"e {x} {y}" for x, y in g.edge_names())
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    names: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "v" and len(fields) == 2:
            names.append(fields[1])
        elif fields[0] == "e" and len(fields) == 3:
            edges.append((fields[1], fields[2]))
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    return Graph.from_edges(names, edges)


def to_document(g: Graph) -> dict:
    return {"vertices": list(g.names), "edges": [list(e) for e in g.edge_names()]}


def from_document(doc: dict) -> Graph:
    try:
        names = doc["vertices"]
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from None
    if any(len(e) != 2 for e in edges):
        raise GraphError("every edge must have exactly two endpoints")
    return Graph.from_edges(names, edges)  # type: ignore[arg-type]


def to_json(g: Graph) -> str:
    return json.dumps(to_document(g), indent=2) + "\n"


def from_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON graph: {exc}") from None
    return from_document(doc)


def loads(text: str, fmt: str | None = None) -> Graph:
    """Parse a graph, sniffing the format when ``fmt`` is not given."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        return from_json(text)
    if fmt == "text":
        return from_text(text)
    raise GraphError(f"unknown graph format {fmt!r}")


def dumps(g: Graph, fmt: str = "text") -> str:
    if fmt == "json":
        return to_json(g)
    if fmt == "text":
        return to_text(g)
    raise GraphError(f"unknown graph format {fmt!r}")


def cycle_graph(n: int, prefix: str = "p") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph.from_edges(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int, prefix: str = "v") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph.from_edges(names, combinations(names, 2))
