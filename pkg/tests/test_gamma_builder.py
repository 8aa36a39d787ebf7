import pytest

from oracles import common_join_by_assignment, edge_set

from racgkit.gamma_builder import (
    GammaConstructionError,
    GammaParams,
    build_gamma,
    build_gamma_n,
    default_points,
    racg_presentation,
    to_dot,
)
from racgkit.graph_core import cycle_graph, induced_subgraph, is_induced_cycle, join_decomposition
from racgkit.join_analysis import pair_in_common_join


def test_gamma_1():
    g = build_gamma_n(1)
    assert g.names == ("a1", "b1") and g.edge_count == 0


def test_gamma_14_counts():
    g = build_gamma_n(14)
    assert (g.n, g.edge_count) == (28, 52)


def test_gamma_2_is_k22():
    g = build_gamma_n(2)
    assert edge_set(g) == {frozenset(p) for p in
                           [("a1", "a2"), ("a1", "b2"), ("b1", "a2"), ("b1", "b2")]}
    jd = join_decomposition(g)
    assert {p.names for p in jd.parts} == {("a1", "b1"), ("a2", "b2")}


@pytest.mark.parametrize("n", range(1, 12))
def test_gamma_n_structure(n):
    g = build_gamma_n(n)
    assert g.edge_count == 4 * (n - 1)
    for i in range(1, n + 1):
        assert not g.adjacent(f"a{i}", f"b{i}")


def test_gamma_n_rejects_zero():
    with pytest.raises(GammaConstructionError):
        build_gamma_n(0)


@pytest.mark.parametrize("n, m, expected", [
    (14, 5, ("a1", "a4", "a7", "a10", "a13")),
    (13, 5, ("a1", "a4", "a7", "a10", "a13")),
    (20, 6, ("a1", "a4", "a7", "a10", "a13", "a16")),
])
def test_default_points(n, m, expected):
    pts = default_points(n, m)
    assert pts.names == expected
    g = build_gamma_n(n)
    for i, p in enumerate(expected):
        for q in expected[i + 1:]:
            assert pair_in_common_join(g, p, q) is None


@pytest.mark.parametrize("n, m", [(14, 4), (12, 5)])
def test_default_points_errors(n, m):
    with pytest.raises(GammaConstructionError):
        default_points(n, m)


def test_build_gamma_default(gamma14):
    assert (gamma14.n, gamma14.edge_count) == (28, 57)
    assert edge_set(build_gamma_n(14)) <= edge_set(gamma14)


def test_build_gamma_adjacent_points():
    with pytest.raises(GammaConstructionError) as info:
        build_gamma(GammaParams(14, 5, ("a1", "a2", "a7", "a10", "a13")))
    assert info.value.pair == ("a1", "a2")


def test_build_gamma_common_join_points():
    with pytest.raises(GammaConstructionError) as info:
        build_gamma(GammaParams(14, 5, ("a1", "a3", "a7", "a10", "a13")))
    err = info.value
    assert err.pair == ("a1", "a3")
    assert set(err.witness.side_b.names) == {"a2", "b2"}
    assert err.to_dict()["witness"]["side_b"] == ["a2", "b2"]


@pytest.mark.parametrize("kwargs", [
    dict(n=0), dict(n=14, m=4), dict(n=10, m=5), dict(n=14, m=5, points=("a1", "a4")),
])
def test_gamma_params_validation(kwargs):
    with pytest.raises(GammaConstructionError):
        GammaParams(**kwargs)


def test_build_gamma_unknown_or_repeated_point():
    with pytest.raises(GammaConstructionError):
        build_gamma(GammaParams(14, 5, ("a1", "a4", "a7", "a10", "a99")))
    with pytest.raises(GammaConstructionError):
        build_gamma(GammaParams(14, 5, ("a1", "a4", "a7", "a10", "a1")))


def test_mixed_side_points_accepted():
    g = build_gamma(GammaParams(14, 5, ("a1", "b4", "a7", "b10", "a13")))
    assert is_induced_cycle(g, ["a1", "b4", "a7", "b10", "a13"])


@pytest.mark.parametrize("m", [5, 6, 7])
@pytest.mark.parametrize("extra", [0, 1, 3])
def test_gamma_invariants(m, extra):
    n = 3 * m - 2 + extra
    g = build_gamma(GammaParams(n, m))
    assert (g.n, g.edge_count) == (2 * n, 4 * (n - 1) + m)
    assert edge_set(build_gamma_n(n)) <= edge_set(g)
    pts = default_points(n, m).names
    sub = induced_subgraph(g, pts)
    assert sub.edge_count == m and is_induced_cycle(sub, pts)


@pytest.mark.parametrize("n", range(2, 11))
def test_common_join_iff_close(n):
    g = build_gamma_n(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            found = pair_in_common_join(g, f"a{i}", f"a{j}") is not None
            assert found == (j - i <= 2), (n, i, j)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_common_join_iff_close_exhaustive(n):
    g = build_gamma_n(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            assert common_join_by_assignment(g, f"a{i}", f"a{j}") == (j - i <= 2)


def test_presentations():
    p1 = racg_presentation(build_gamma_n(1))
    assert p1.generators == ("a1", "b1") and p1.relators == ("a1^2", "b1^2")
    c5 = racg_presentation(cycle_graph(5))
    assert len(c5.generators) == 5
    assert sum(r.endswith("^2") for r in c5.relators) == 5
    assert sum(r.startswith("[") for r in c5.relators) == 5
    p2 = racg_presentation(build_gamma_n(2))
    assert len(p2.relators) == 8
    assert p2.to_text().splitlines()[0] == "gen: a1 b1 a2 b2"
    assert "[a1,a2]" in p2.relators


def test_presentation_counts_match_graph(gamma14):
    pres = racg_presentation(gamma14)
    assert len(pres.relators) == gamma14.n + gamma14.edge_count
    edges = edge_set(gamma14)
    for r in pres.relators:
        if r.startswith("["):
            s, t = r[1:-1].split(",")
            assert frozenset((s, t)) in edges


def test_dot():
    dot = to_dot(build_gamma_n(2))
    assert dot.startswith("graph G {")
    assert '"a1" -- "a2";' in dot
    assert dot.count("--") == 4
