"""The ladder graphs ``gamma_n``, the cycle-augmented ``gamma``, and RACG presentations."""

from __future__ import annotations

from dataclasses import dataclass

from .graph_core import Graph, GraphError, VertexSet
from .join_analysis import JoinWitness, common_join_nonadjacent, pair_in_common_join

MIN_CYCLE_LENGTH = 5


class GammaConstructionError(ValueError):
    """Invalid parameters or point set; carries the offending pair and witness."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None,
                 witness: JoinWitness | None = None):
        super().__init__(message)
        self.pair = pair
        self.witness = witness

    def to_dict(self) -> dict:
        return {
            "error": str(self),
            "pair": list(self.pair) if self.pair else None,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class GammaParams:
    n: int
    m: int | None = None
    points: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GammaConstructionError(f"n must be at least 1, got {self.n}")
        if self.points is not None:
            object.__setattr__(self, "points", tuple(self.points))
            if self.m is None:
                object.__setattr__(self, "m", len(self.points))
        if self.m is None:
            return
        if self.m < MIN_CYCLE_LENGTH:
            raise GammaConstructionError(
                f"cycle length must be at least {MIN_CYCLE_LENGTH}, got {self.m}")
        if self.points is not None and len(self.points) != self.m:
            raise GammaConstructionError(
                f"expected {self.m} points, got {len(self.points)}")
        if self.points is None and self.n < 3 * self.m - 2:
            raise GammaConstructionError(
                f"default points need n >= {3 * self.m - 2} for m={self.m}, got n={self.n}")


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...]

    def to_text(self) -> str:
        return "gen: " + " ".join(self.generators) + "\n" + "".join(r + "\n" for r in self.relators)

    def to_dict(self) -> dict:
        return {"generators": list(self.generators), "relators": list(self.relators)}


def gamma_n_names(n: int) -> list[str]:
    names = []
    for i in range(1, n + 1):
        names += [f"a{i}", f"b{i}"]
    return names


def build_gamma_n(n: int) -> Graph:
    """Ladder of ``n`` non-adjacent pairs, consecutive pairs completely joined."""
    if n < 1:
        raise GammaConstructionError(f"n must be at least 1, got {n}")
    edges = []
    for i in range(1, n):
        for x in (f"a{i}", f"b{i}"):
            for y in (f"a{i + 1}", f"b{i + 1}"):
                edges.append((x, y))
    return Graph.from_edges(gamma_n_names(n), edges)


def default_points(n: int, m: int) -> VertexSet:
    """``a1, a4, a7, ...``: ``m`` a-vertices spaced three levels apart."""
    if m < MIN_CYCLE_LENGTH:
        raise GammaConstructionError(
            f"cycle length must be at least {MIN_CYCLE_LENGTH}, got {m}")
    if n < 3 * m - 2:
        raise GammaConstructionError(f"n={n} too small for {m} points; need n >= {3 * m - 2}")
    g = build_gamma_n(n)
    return VertexSet.of(g, [f"a{3 * k + 1}" for k in range(m)])


def build_gamma(params: GammaParams) -> Graph:
    """``gamma_n`` plus the cycle through the chosen points.

    Every pair of points is checked against ``gamma_n`` before the cycle is
    added, and every non-adjacent pair is rechecked in the result.
    """
    base = build_gamma_n(params.n)
    if params.m is None:
        return base
    if params.points is None:
        points = default_points(params.n, params.m).names
    else:
        points = params.points
    if len(set(points)) != len(points):
        raise GammaConstructionError("points must be distinct")
    try:
        base.mask_of(points)
    except GraphError as exc:
        raise GammaConstructionError(f"{exc} in gamma_{params.n}") from None

    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if base.adjacent(p, q):
                raise GammaConstructionError(
                    f"{p} and {q} are adjacent in gamma_{params.n}", pair=(p, q))
            witness = common_join_nonadjacent(base, p, q)
            if witness is not None:
                raise GammaConstructionError(
                    f"{p} and {q} lie in a common join of gamma_{params.n} "
                    f"(common link contains non-adjacent {witness.side_b.names})",
                    pair=(p, q), witness=witness)

    m = len(points)
    cycle_edges = [(points[k], points[(k + 1) % m]) for k in range(m)]
    g = Graph.from_edges(base.names, base.edge_names() + cycle_edges)

    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if g.adjacent(p, q):
                continue
            witness = pair_in_common_join(g, p, q)
            if witness is not None:
                raise GammaConstructionError(
                    f"{p} and {q} lie in a common join of the augmented graph",
                    pair=(p, q), witness=witness)
    return g


def racg_presentation(g: Graph) -> Presentation:
    relators = [f"{s}^2" for s in g.names]
    relators += [f"[{s},{t}]" for s, t in g.edge_names()]
    return Presentation(g.names, tuple(relators))


def to_dot(g: Graph, name: str = "G") -> str:
    def quote(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"graph {name} {{"]
    lines += [f"  {quote(v)};" for v in g.names]
    lines += [f"  {quote(x)} -- {quote(y)};" for x, y in g.edge_names()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def points_from_string(text: str) -> tuple[str, ...]:
    pts = tuple(p.strip() for p in text.split(",") if p.strip())
    if not pts:
        raise GraphError("empty point list")
    return pts
