"""Common-join queries for vertex pairs.

A pair ``u, v`` lies in a common join when some induced subgraph containing
both splits as ``A * B`` (every cross pair adjacent) with a non-adjacent pair
inside each side.

Bounded witnesses.  Any witness can be shrunk to one where the side holding
``u`` has at most three vertices: ``u`` plus a non-adjacent pair (which may
use ``u``), or ``{u, v, w}`` when ``u, v`` share a side.  If ``u, v`` are
adjacent, share side ``A``, and neither is non-adjacent to the pair
``p, q`` of ``A``, moving ``v`` across gives ``{u, p, q} * {v, r, s}``.
Once the side of ``u`` is fixed, the opposite side can be taken inside the
common link of that side, so the search below is over at most ``O(n^2)``
candidate sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph_core import (
    Graph,
    GraphError,
    Vertex,
    VertexSet,
    find_nonadjacent_pair,
    iter_bits,
)

DEFAULT_ORACLE_CAP = 12


@dataclass(frozen=True)
class JoinWitness:
    side_a: VertexSet
    side_b: VertexSet
    nonadjacent_pair_a: tuple[int, int]
    nonadjacent_pair_b: tuple[int, int]

    @property
    def size(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def validate(self, g: Graph, u: Vertex | None = None, v: Vertex | None = None) -> None:
        """Raise ``AssertionError`` unless this is a genuine join witness."""
        a, b = self.side_a.mask, self.side_b.mask
        assert a and b and not a & b, "sides must be disjoint and non-empty"
        for x in iter_bits(a):
            assert g.rows[x] & b == b, "cross pair not adjacent"
        for side, (x, y) in ((a, self.nonadjacent_pair_a), (b, self.nonadjacent_pair_b)):
            assert side >> x & 1 and side >> y & 1 and x != y
            assert not g.rows[x] >> y & 1, "side pair is adjacent"
        for w in (u, v):
            if w is not None:
                assert (a | b) >> g.index(w) & 1, "queried vertex outside witness"

    def to_dict(self) -> dict:
        g = self.side_a.graph
        return {
            "side_a": list(self.side_a.names),
            "side_b": list(self.side_b.names),
            "nonadjacent_pair_a": [g.names[i] for i in self.nonadjacent_pair_a],
            "nonadjacent_pair_b": [g.names[i] for i in self.nonadjacent_pair_b],
        }


def common_link(g: Graph, mask: int) -> int:
    """Vertices outside ``mask`` adjacent to every vertex of ``mask``."""
    out = g.full_mask & ~mask
    for x in iter_bits(mask):
        out &= g.rows[x]
    return out


def common_join_nonadjacent(g: Graph, u: Vertex, v: Vertex) -> JoinWitness | None:
    """Witness ``{u, v} * {x, y}`` with ``x, y`` a non-adjacent pair in the common link."""
    i, j = g.index(u), g.index(v)
    if i == j:
        raise GraphError("query needs two distinct vertices")
    if g.rows[i] >> j & 1:
        raise GraphError(
            f"{g.names[i]} and {g.names[j]} are adjacent; use pair_in_common_join"
        )
    pair = find_nonadjacent_pair(g, g.rows[i] & g.rows[j])
    if pair is None:
        return None
    return JoinWitness(
        VertexSet(g, 1 << i | 1 << j), VertexSet(g, 1 << pair[0] | 1 << pair[1]),
        (min(i, j), max(i, j)), pair,
    )


def _opposite_side(g: Graph, side: int, v: int) -> tuple[int, tuple[int, int]] | None:
    """Smallest opposite side inside the common link of ``side`` containing ``v``
    when ``v`` is not already in ``side``."""
    cl = common_link(g, side)
    if side >> v & 1:
        pair = find_nonadjacent_pair(g, cl)
        if pair is None:
            return None
        return 1 << pair[0] | 1 << pair[1], pair
    if not cl >> v & 1:
        return None
    miss = cl & ~g.rows[v] & ~(1 << v)
    if miss:
        y = (miss & -miss).bit_length() - 1
        return 1 << v | 1 << y, (min(v, y), max(v, y))
    pair = find_nonadjacent_pair(g, cl & ~(1 << v))
    if pair is None:
        return None
    return 1 << v | 1 << pair[0] | 1 << pair[1], pair


def pair_in_common_join(g: Graph, u: Vertex, v: Vertex) -> JoinWitness | None:
    """Smallest join witness containing both ``u`` and ``v``, or ``None``.

    Ties on size break by the sorted index tuple of ``side_a`` then ``side_b``,
    so results are deterministic.
    """
    i, j = g.index(u), g.index(v)
    if i == j:
        raise GraphError("query needs two distinct vertices")
    rows = g.rows
    full = g.full_mask
    candidates: list[int] = []
    if not rows[i] >> j & 1:
        # non-adjacent u, v always share a side, and {u, v} is already minimal
        candidates.append(1 << i | 1 << j)
    else:
        # u and v on the same side with a third vertex breaking the clique
        for w in iter_bits(full & ~(1 << i | 1 << j)):
            if not (rows[w] >> i & 1 and rows[w] >> j & 1):
                candidates.append(1 << i | 1 << j | 1 << w)
        # v on the opposite side: the rest of u's side lies in link(v)
        pool = list(iter_bits(rows[j] & ~(1 << i)))
        for w in pool:
            if not rows[i] >> w & 1:
                candidates.append(1 << i | 1 << w)
        for w, z in combinations(pool, 2):
            if not rows[w] >> z & 1:
                candidates.append(1 << i | 1 << w | 1 << z)

    best = None
    for side_a in candidates:
        pair_a = find_nonadjacent_pair(g, side_a)
        if pair_a is None:
            continue
        found = _opposite_side(g, side_a, j)
        if found is None:
            continue
        side_b, pair_b = found
        key = (
            side_a.bit_count() + side_b.bit_count(),
            tuple(iter_bits(side_a)),
            tuple(iter_bits(side_b)),
        )
        if best is None or key < best[0]:
            best = (key, side_a, side_b, pair_a, pair_b)
    if best is None:
        return None
    _, side_a, side_b, pair_a, pair_b = best
    return JoinWitness(VertexSet(g, side_a), VertexSet(g, side_b), pair_a, pair_b)


def _has_gap(g: Graph, combo: tuple[int, ...]) -> bool:
    return any(not g.adjacent(x, y) for x, y in combinations(combo, 2))


def iter_join_subgraphs(g: Graph, within: int | None = None):
    """Yield every ``(A, B)`` mask pair forming a non-degenerate join inside ``within``.

    Each unordered split is produced once (``A`` holds the lowest vertex).
    """
    within = g.full_mask if within is None else within
    verts = list(iter_bits(within))
    for r in range(2, len(verts) + 1):
        for combo in combinations(verts, r):
            a = 0
            for x in combo:
                a |= 1 << x
            if not _has_gap(g, combo):
                continue
            cl = within & ~a
            for x in combo:
                cl &= g.rows[x]
            # B ranges over subsets of the common link, restricted above min(A)
            cl &= ~((1 << (combo[0] + 1)) - 1)
            pool = list(iter_bits(cl))
            for s in range(2, len(pool) + 1):
                for bcombo in combinations(pool, s):
                    if _has_gap(g, bcombo):
                        b = 0
                        for x in bcombo:
                            b |= 1 << x
                        yield a, b


def brute_force_common_join(
    g: Graph, u: Vertex, v: Vertex, cap: int = DEFAULT_ORACLE_CAP
) -> bool:
    """Exhaustive check over all join subgraphs; validation oracle only."""
    if g.n > cap:
        raise GraphError(f"graph has {g.n} vertices, above oracle cap {cap}")
    i, j = g.index(u), g.index(v)
    if i == j:
        raise GraphError("query needs two distinct vertices")
    need = 1 << i | 1 << j
    return any((a | b) & need == need for a, b in iter_join_subgraphs(g))


def brute_force_common_join_pairs(g: Graph, cap: int = DEFAULT_ORACLE_CAP) -> set[tuple[int, int]]:
    """All index pairs ``(i, j)``, ``i < j``, covered by some join subgraph."""
    if g.n > cap:
        raise GraphError(f"graph has {g.n} vertices, above oracle cap {cap}")
    covered: set[int] = set()
    for a, b in iter_join_subgraphs(g):
        covered.add(a | b)
    pairs: set[tuple[int, int]] = set()
    for s in covered:
        pairs.update(combinations(iter_bits(s), 2))
    return pairs
