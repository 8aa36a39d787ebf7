from dataclasses import replace
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from oracles import stable_witness_exists

from racgkit.certify import (
    Classification,
    DivergenceReport,
    StaleCertificateError,
    WitnessCertificate,
    classify_divergence,
    derived_flags,
    find_stable_cycle,
    issue_certificate,
    search_stable_cycle,
    verify_certificate,
)
from racgkit.gamma_builder import GammaParams, build_gamma, build_gamma_n
from racgkit.graph_core import GraphError, build_graph, complete_graph, cycle_graph
from racgkit.join_analysis import common_join_nonadjacent
from racgkit.random_lab import sample_gnp, trial_stream


def test_verify_gamma_cycle(gamma14):
    cert = issue_certificate(gamma14, ["a1", "a4", "a7", "a10", "a13"])
    report = verify_certificate(gamma14, cert)
    assert report.passed
    assert len(cert.checked_pairs) == 5


def test_verify_c5_whole_group():
    c5 = cycle_graph(5)
    assert verify_certificate(c5, issue_certificate(c5, c5.names)).passed


def test_verify_rejects_non_cycle():
    g14 = build_gamma_n(14)
    cert = WitnessCertificate(("a1", "a2", "a3", "a4", "a5"), (), g14.digest)
    report = verify_certificate(g14, cert)
    assert not report.passed and "induced cycle" in report.reason


def test_verify_reports_joined_pair():
    # C5 with a suspension over the pair p1, p3 puts that pair in a common join
    c5 = cycle_graph(5)
    g = build_graph(list(c5.names) + ["x", "y"],
                    c5.edge_names() + [("x", "p1"), ("x", "p3"), ("y", "p1"), ("y", "p3")])
    cert = WitnessCertificate(c5.names, (), g.digest)
    report = verify_certificate(g, cert)
    assert not report.passed
    assert report.failing_pair == ("p1", "p3")
    report.witness.validate(g, "p1", "p3")
    assert set(report.witness.side_b.names) <= {"p2", "x", "y"}


def test_verify_stale_hash(gamma14):
    cert = find_stable_cycle(gamma14)
    with pytest.raises(StaleCertificateError):
        verify_certificate(build_gamma_n(14), cert)


def test_verify_short_cycle():
    c4 = cycle_graph(4)
    cert = WitnessCertificate(c4.names, (), c4.digest)
    assert not verify_certificate(c4, cert).passed


def test_find_in_gamma(gamma14):
    cert = find_stable_cycle(gamma14)
    assert cert is not None and cert.length >= 5
    assert verify_certificate(gamma14, cert).passed
    assert cert == find_stable_cycle(gamma14)


def test_find_none_in_clique():
    assert find_stable_cycle(complete_graph(5)) is None


@pytest.mark.parametrize("n", range(2, 9))
def test_find_none_in_gamma_n(n):
    g = build_gamma_n(n)
    assert not stable_witness_exists(g)
    result = search_stable_cycle(g, budget=None)
    assert result.certificate is None and not result.exhausted_budget


def test_find_parameter_errors(gamma14):
    with pytest.raises(GraphError):
        find_stable_cycle(gamma14, min_len=4)
    with pytest.raises(GraphError):
        find_stable_cycle(gamma14, exhaustive=True)
    assert find_stable_cycle(gamma14, exhaustive=True, exhaustive_cap=28) is not None


def test_budget_exhaustion_is_reported():
    g = sample_gnp(40, 0.15, trial_stream(3, 0))
    result = search_stable_cycle(g, budget=1)
    assert result.exhausted_budget and result.certificate is None


def test_min_len_respected():
    c7 = cycle_graph(7)
    assert find_stable_cycle(c7, min_len=7).length == 7
    assert find_stable_cycle(c7, min_len=8) is None


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=5, max_n=9))
def test_search_is_sound_and_complete_on_small_graphs(g):
    result = search_stable_cycle(g, budget=None)
    assert (result.certificate is not None) == stable_witness_exists(g)
    if result.certificate is not None:
        assert verify_certificate(g, result.certificate).passed


def test_search_soundness_random():
    for t in range(40):
        g = sample_gnp(25, 0.2, trial_stream(5, t))
        cert = find_stable_cycle(g, budget=20_000)
        if cert is not None:
            assert verify_certificate(g, cert).passed
            for x, y in combinations(cert.cycle, 2):
                if not g.adjacent(x, y):
                    assert common_join_nonadjacent(g, x, y) is None


def test_classify_ladder(gamma14):
    assert classify_divergence(complete_graph(5)).classification is Classification.FINITE
    assert classify_divergence(cycle_graph(4)).classification is Classification.LINEAR
    assert classify_divergence(gamma14).classification is Classification.QUADRATIC
    assert classify_divergence(cycle_graph(5)).classification is Classification.UNCLASSIFIED
    assert classify_divergence(build_gamma_n(1)).classification is Classification.MULTI_ENDED
    with pytest.raises(GraphError):
        classify_divergence(build_graph([], []))


def test_classify_cone_over_c4_is_linear():
    g = build_graph(["c", "x1", "x2", "y1", "y2"],
                    [("c", v) for v in ("x1", "x2", "y1", "y2")]
                    + [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")])
    rep = classify_divergence(g)
    assert rep.classification is Classification.LINEAR
    assert rep.evidence["clique_factor"] == ["c"]


@pytest.mark.parametrize("n, m", [(n, m) for m in (5, 6) for n in range(3 * m - 2, 21)])
def test_gamma_family_is_quadratic(n, m):
    g = build_gamma(GammaParams(n, m))
    assert classify_divergence(g).classification is Classification.QUADRATIC


def test_flags(gamma14):
    rep = classify_divergence(gamma14)
    cert = find_stable_cycle(gamma14)
    flags = derived_flags(rep, cert, graph=gamma14)
    assert flags.not_relatively_hyperbolic and flags.stable_one_ended_subgroup
    assert flags.morse_boundary_circle and flags.not_qi_to_raag
    assert flags.citations["morse_boundary_circle"]

    flags = derived_flags(rep, None)
    assert flags.not_relatively_hyperbolic
    assert not (flags.stable_one_ended_subgroup or flags.morse_boundary_circle or flags.not_qi_to_raag)

    rep_u = replace(rep, classification=Classification.UNCLASSIFIED)
    flags = derived_flags(rep_u, cert)
    assert not flags.not_relatively_hyperbolic
    assert flags.stable_one_ended_subgroup and flags.morse_boundary_circle and flags.not_qi_to_raag


def test_flags_graph_mismatch(gamma14):
    cert = find_stable_cycle(gamma14)
    with pytest.raises(StaleCertificateError):
        derived_flags(classify_divergence(cycle_graph(5)), cert)


@given(st.sampled_from(list(Classification)), st.booleans())
def test_flag_monotonicity(classification, with_cert):
    rep = DivergenceReport(classification, {}, (), "h" * 64)
    cert = WitnessCertificate(tuple(f"p{i}" for i in range(5)), (), "h" * 64) if with_cert else None
    f = derived_flags(rep, cert)
    if classification in (Classification.LINEAR, Classification.QUADRATIC):
        assert f.not_relatively_hyperbolic
    else:
        assert not f.not_relatively_hyperbolic
    assert f.stable_one_ended_subgroup == with_cert
    assert f.morse_boundary_circle == with_cert
    if f.morse_boundary_circle:
        assert f.not_qi_to_raag
    for name, value in f.to_dict().items():
        assert bool(value["citations"]) == value["value"]


def test_certificate_round_trip(gamma14):
    cert = find_stable_cycle(gamma14)
    assert WitnessCertificate.from_dict(cert.to_dict()) == cert
    with pytest.raises(GraphError):
        WitnessCertificate.from_dict({"cycle": []})
