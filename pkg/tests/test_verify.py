import json

import networkx as nx
import pytest

from chebytower import verify as verify_module
from chebytower.errors import DomainError, ResourceGuardError
from chebytower.polyseq import EvenPoly
from chebytower.verify import (
    CheckRecord,
    VerificationReport,
    build_verification_graph,
    default_thetas,
    verify,
)


def test_minimal_suite_passes():
    report = verify(1, 1, 64, thetas=default_thetas(4))
    assert report.passed, report.to_text()
    assert report.counts()["fail"] == 0
    assert report.counts()["skipped"] == 0


def test_small_suite_passes_and_names_checks():
    report = verify(4, 4, 128, thetas=default_thetas(4))
    assert report.passed, report.to_text()
    text = report.to_text()
    assert "cyclotomic_identity n=4: pass" in text
    assert "vandermonde_equals_recursive kmax=4: pass" in text
    names = [c.name for c in report.checks]
    assert names == sorted(names)
    probes = [c for c in report.checks if c.name == "corollary_probe"]
    assert [c.params for c in probes] == ["e=3", "e=4", "e=5", "e=6", "e=7"]
    assert "index 0 vanishes, not 1" in probes[1].detail


@pytest.mark.slow
def test_full_range_suite_passes():
    report = verify(10, 12, 256, thetas=default_thetas(100))
    assert report.passed, report.to_text()
    counts = report.counts()
    assert counts["fail"] == 0 and counts["skipped"] == 0
    assert "vandermonde_equals_recursive kmax=12: pass" in report.to_text()
    assert "trig_residual n=10" in report.to_text()


def test_graph_is_acyclic():
    G = build_verification_graph(3, 3, 64, thetas=default_thetas(2))
    assert nx.is_directed_acyclic_graph(G)
    assert G.has_edge("p_3", "cyclotomic_identity n=3")
    assert G.has_edge("table_recursive", "invariant_sum n=2")


def test_disagreement_fails_the_report(monkeypatch):
    monkeypatch.setattr(verify_module, "gen_q", lambda n, max_degree_log2: EvenPoly((1,)))
    report = verify(2, 2, 64, thetas=default_thetas(2))
    assert not report.passed
    failed = {(c.name, c.params) for c in report.failures()}
    assert ("p_equals_q", "n=0") in failed
    assert "differs" in report.failures()[0].detail


def test_failed_artifact_skips_its_checks(monkeypatch):
    def broken(kmax):
        raise ArithmeticError("broken table")

    monkeypatch.setattr(verify_module, "invariants_recursive", broken)
    report = verify(2, 3, 64, thetas=default_thetas(2))
    assert not report.passed
    by_name = {c.name: c for c in report.checks}
    assert by_name["invariants_recursive"].status == "fail"
    assert by_name["diagonal_equals_weighted_catalan"].status == "skipped"
    assert by_name["vandermonde_equals_recursive"].status == "skipped"
    assert by_name["p_equals_q"].status == "pass"


def test_limits():
    with pytest.raises(ResourceGuardError):
        verify(20, 2, 64)
    with pytest.raises(DomainError):
        verify(2, 0, 64)


def test_report_rendering():
    report = VerificationReport([
        CheckRecord("a_check", "n=1", "pass"),
        CheckRecord("b_check", "", "fail", "boom", 3),
    ])
    assert not report.passed
    lines = report.to_text().splitlines()
    assert lines[0] == "a_check n=1: pass"
    assert lines[1] == "b_check: fail (boom)"
    assert lines[2] == "1 passed, 1 failed, 0 skipped"
    data = json.loads(report.to_json())
    assert data["passed"] is False
    assert data["checks"][1]["elapsed_ms"] == 3


def test_thetas_are_reproducible():
    assert default_thetas(5, seed=3) == default_thetas(5, seed=3)
