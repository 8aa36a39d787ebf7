"""Stability witnesses, divergence classification and derived group flags.

A stability witness is an induced cycle of length at least 5 in which no
non-adjacent pair of cycle vertices lies in a common join.  For such a cycle
the special subgroup is a hyperbolic orbifold group, and the join condition
is the combinatorial input to the stability argument.  The flags assembled
here record consequences of verified premises; no group geometry is computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Sequence

from .graph_core import (
    Graph,
    GraphError,
    Vertex,
    find_nonadjacent_pair,
    is_induced_cycle,
    iter_bits,
    join_decomposition,
    induced_subgraph,
)
from .join_analysis import JoinWitness, common_join_nonadjacent
from .square_cfs import ChainMode, CfsReport, is_cfs

SCHEMA_VERSION = 1
DEFAULT_BUDGET = 200_000
DEFAULT_EXHAUSTIVE_CAP = 10
MIN_WITNESS_LENGTH = 5

CITE_FINITE = "RACG of a complete graph is the finite group (Z/2)^n"
CITE_MULTI_ENDED = "disconnected presentation graph: free product decomposition, more than one end"
CITE_LINEAR = "non-degenerate join: direct product of two infinite special subgroups, linear divergence"
CITE_QUADRATIC = "Dani-Thomas, Divergence in right-angled Coxeter groups, Thm 1.1: CFS and not a join => quadratic divergence"
CITE_REL_HYP = "Sisto, On metric relative hyperbolicity, Thm 1.3: relatively hyperbolic groups have at least exponential divergence"
CITE_STABLE = "Abbott et al., Largest acylindrical actions and stability, Thm B and Thm 3.11: bounded projections characterize stability"
CITE_ORBIFOLD = "induced cycle of length >= 5 generates a 2-dimensional hyperbolic orbifold group"
CITE_MORSE_CIRCLE = "Cordes, Morse boundaries of proper geodesic metric spaces, Prop 4.2: stable hyperbolic subgroup boundary embeds in the Morse boundary"
CITE_MORSE_QI = "Cordes, Morse boundaries of proper geodesic metric spaces, Main Thm (2): Morse boundary is a quasi-isometry invariant"
CITE_RAAG_TD = "Charney-Sultan; Cordes-Hume Thm F: RAAG Morse boundaries are totally disconnected"


class StaleCertificateError(GraphError):
    """The certificate was issued for a different graph."""


class Classification(str, Enum):
    FINITE = "finite"
    MULTI_ENDED = "multi_ended"
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class WitnessCertificate:
    cycle: tuple[str, ...]
    checked_pairs: tuple[tuple[str, str], ...]
    graph_hash: str

    @property
    def length(self) -> int:
        return len(self.cycle)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "witness_certificate",
            "cycle": list(self.cycle),
            "checked_pairs": [{"pair": list(p), "verdict": "no_common_join"}
                              for p in self.checked_pairs],
            "graph_hash": self.graph_hash,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "WitnessCertificate":
        try:
            return cls(
                cycle=tuple(doc["cycle"]),
                checked_pairs=tuple(tuple(item["pair"]) for item in doc["checked_pairs"]),
                graph_hash=doc["graph_hash"],
            )
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed certificate: {exc}") from None


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    reason: str
    failing_pair: tuple[str, str] | None = None
    witness: JoinWitness | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "verification",
            "passed": self.passed,
            "reason": self.reason,
            "failing_pair": None if self.failing_pair is None else list(self.failing_pair),
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def _nonadjacent_cycle_pairs(g: Graph, cycle: Sequence[int]) -> list[tuple[int, int]]:
    return [(x, y) for x, y in combinations(cycle, 2) if not g.rows[x] >> y & 1]


def issue_certificate(g: Graph, cycle: Sequence[Vertex]) -> WitnessCertificate:
    """Certificate for ``cycle``; raises if it is not a valid stability witness."""
    idx = [g.index(v) for v in cycle]
    cert = WitnessCertificate(
        cycle=tuple(g.names[i] for i in idx),
        checked_pairs=tuple((g.names[x], g.names[y]) for x, y in _nonadjacent_cycle_pairs(g, idx)),
        graph_hash=g.digest,
    )
    report = verify_certificate(g, cert)
    if not report.passed:
        raise GraphError(f"not a stability witness: {report.reason}")
    return cert


def verify_certificate(g: Graph, cert: WitnessCertificate) -> VerificationReport:
    """Re-check a certificate from scratch against ``g``."""
    if cert.graph_hash != g.digest:
        raise StaleCertificateError("certificate graph hash does not match the graph")
    idx = [g.index(v) for v in cert.cycle]
    if len(idx) < MIN_WITNESS_LENGTH:
        return VerificationReport(False, f"cycle length {len(idx)} is below {MIN_WITNESS_LENGTH}")
    if len(set(idx)) != len(idx) or not is_induced_cycle(g, idx):
        return VerificationReport(False, "not an induced cycle")
    listed = {frozenset(p) for p in cert.checked_pairs}
    for x, y in _nonadjacent_cycle_pairs(g, idx):
        pair = (g.names[x], g.names[y])
        witness = common_join_nonadjacent(g, x, y)
        if witness is not None:
            return VerificationReport(False, f"{pair[0]} and {pair[1]} lie in a common join",
                                      pair, witness)
        if frozenset(pair) not in listed:
            return VerificationReport(False, f"pair {pair[0]},{pair[1]} missing from checked_pairs",
                                      pair)
    return VerificationReport(True, f"induced {len(idx)}-cycle with no non-adjacent pair in a common join")


def joined_pair_masks(g: Graph) -> list[int]:
    """Row ``x``: vertices ``y`` non-adjacent to ``x`` sharing a common join with it."""
    rows = g.rows
    out = [0] * g.n
    for x in range(g.n):
        for y in iter_bits(g.full_mask & ~rows[x] & ~((1 << (x + 1)) - 1)):
            if find_nonadjacent_pair(g, rows[x] & rows[y]) is not None:
                out[x] |= 1 << y
                out[y] |= 1 << x
    return out


@dataclass
class SearchResult:
    certificate: WitnessCertificate | None
    expansions: int
    exhausted_budget: bool


def search_stable_cycle(g: Graph, min_len: int = MIN_WITNESS_LENGTH,
                        budget: int | None = DEFAULT_BUDGET) -> SearchResult:
    """Backtracking over induced paths whose smallest vertex is the start.

    Extensions that would put a non-adjacent pair in a common join are
    pruned.  ``budget=None`` searches to completion.
    """
    if min_len < MIN_WITNESS_LENGTH:
        raise GraphError(f"min_len must be at least {MIN_WITNESS_LENGTH}")
    rows = g.rows
    joined = joined_pair_masks(g)
    expansions = 0

    class _OutOfBudget(Exception):
        pass

    def extend(path: list[int], above: int, interior: int, banned: int) -> list[int] | None:
        # interior: union of links of path[1:-1]; banned: union of joined[] over path
        nonlocal expansions
        expansions += 1
        if budget is not None and expansions > budget:
            raise _OutOfBudget
        start, last = path[0], path[-1]
        used = 0
        for v in path:
            used |= 1 << v
        allowed = rows[last] & above & ~used & ~interior & ~banned
        for w in iter_bits(allowed):
            if rows[start] >> w & 1:
                if len(path) + 1 >= min_len:
                    return path + [w]
                continue
            found = extend(path + [w], above, interior | rows[last], banned | joined[w])
            if found is not None:
                return found
        return None

    cycle = None
    try:
        for s in range(g.n):
            above = g.full_mask & ~((1 << (s + 1)) - 1)
            for p1 in iter_bits(rows[s] & above):
                cycle = extend([s, p1], above, 0, joined[s] | joined[p1])
                if cycle is not None:
                    break
            if cycle is not None:
                break
    except _OutOfBudget:
        return SearchResult(None, budget or 0, True)

    if cycle is None:
        return SearchResult(None, expansions, False)
    cert = WitnessCertificate(
        cycle=tuple(g.names[i] for i in cycle),
        checked_pairs=tuple((g.names[x], g.names[y]) for x, y in _nonadjacent_cycle_pairs(g, cycle)),
        graph_hash=g.digest,
    )
    return SearchResult(cert, expansions, False)


def find_stable_cycle(g: Graph, min_len: int = MIN_WITNESS_LENGTH,
                      budget: int | None = DEFAULT_BUDGET, exhaustive: bool = False,
                      exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> WitnessCertificate | None:
    """First stability witness in search order, or ``None`` if none was found.

    ``None`` under a finite budget means not found, not that none exists.
    ``exhaustive=True`` drops the budget and is refused above ``exhaustive_cap``
    vertices.
    """
    if exhaustive:
        if g.n > exhaustive_cap:
            raise GraphError(f"exhaustive search refused: {g.n} vertices above cap {exhaustive_cap}")
        budget = None
    return search_stable_cycle(g, min_len, budget).certificate


@dataclass(frozen=True)
class DivergenceReport:
    classification: Classification
    evidence: dict[str, Any]
    citations: tuple[str, ...]
    graph_hash: str
    cfs: CfsReport | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "divergence_report",
            "classification": self.classification.value,
            "evidence": self.evidence,
            "citations": list(self.citations),
            "graph_hash": self.graph_hash,
        }


def classify_divergence(g: Graph) -> DivergenceReport:
    """Decision ladder: clique, disconnected, join after cone stripping, CFS."""
    if g.n == 0:
        raise GraphError("cannot classify the empty graph")
    h = g.digest
    if g.is_clique():
        return DivergenceReport(Classification.FINITE, {"clique": True}, (CITE_FINITE,), h)
    comps = g.components()
    if len(comps) > 1:
        return DivergenceReport(
            Classification.MULTI_ENDED,
            {"components": [list(g.names_of(c)) for c in comps]},
            (CITE_MULTI_ENDED,), h)
    cone = g.cone_mask()
    stripped = induced_subgraph(g, g.full_mask & ~cone)
    jd = join_decomposition(stripped)
    if jd.is_nondegenerate_join:
        ev = jd.to_dict()
        ev["clique_factor"] = list(g.names_of(cone))
        return DivergenceReport(Classification.LINEAR, ev, (CITE_LINEAR,), h)
    cfs = is_cfs(g, ChainMode.DIAGONAL)
    if cfs.holds:
        return DivergenceReport(Classification.QUADRATIC, {"cfs": cfs.to_dict(), "join": jd.to_dict()},
                                (CITE_QUADRATIC,), h, cfs)
    return DivergenceReport(Classification.UNCLASSIFIED, {"cfs": cfs.to_dict(), "join": jd.to_dict()},
                            (), h, cfs)


@dataclass(frozen=True)
class FlagSet:
    not_relatively_hyperbolic: bool
    stable_one_ended_subgroup: bool
    morse_boundary_circle: bool
    not_qi_to_raag: bool
    citations: dict[str, tuple[str, ...]]

    def to_dict(self) -> dict:
        flags = ("not_relatively_hyperbolic", "stable_one_ended_subgroup",
                 "morse_boundary_circle", "not_qi_to_raag")
        return {f: {"value": getattr(self, f), "citations": list(self.citations.get(f, ()))}
                for f in flags}


def derived_flags(report: DivergenceReport, cert: WitnessCertificate | None = None,
                  graph: Graph | None = None) -> FlagSet:
    """Flags implied by the classification and an (already verified) certificate.

    Passing ``graph`` re-verifies the certificate before any flag is set.
    """
    if cert is not None:
        if cert.graph_hash != report.graph_hash:
            raise StaleCertificateError("certificate and report describe different graphs")
        if graph is not None:
            if graph.digest != report.graph_hash:
                raise StaleCertificateError("report does not describe this graph")
            if not verify_certificate(graph, cert).passed:
                raise GraphError("certificate does not verify")
    not_rh = report.classification in (Classification.LINEAR, Classification.QUADRATIC)
    has_cert = cert is not None
    cites: dict[str, tuple[str, ...]] = {}
    if not_rh:
        cites["not_relatively_hyperbolic"] = report.citations + (CITE_REL_HYP,)
    if has_cert:
        cites["stable_one_ended_subgroup"] = (CITE_ORBIFOLD, CITE_STABLE)
        cites["morse_boundary_circle"] = (CITE_STABLE, CITE_MORSE_CIRCLE)
        cites["not_qi_to_raag"] = (CITE_MORSE_CIRCLE, CITE_MORSE_QI, CITE_RAAG_TD)
    return FlagSet(
        not_relatively_hyperbolic=not_rh,
        stable_one_ended_subgroup=has_cert,
        morse_boundary_circle=has_cert,
        not_qi_to_raag=has_cert,
        citations=cites,
    )
