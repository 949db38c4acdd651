import pytest

from respos import oracles
from respos.corpus import builtin
from respos.errors import SemanticError
from respos.oracles import run_suite, suite_names
from respos.report import fails, holds


@pytest.mark.parametrize("size", [1, 2, 3])
def test_all_suites_hold_on_small_pools(size):
    for r in run_suite("all", size):
        assert r.ok, r.counterexamples[:3]


def test_suites_hold_on_builtins():
    structures = [builtin(n) for n in ("fig1", "fig2", "chain4", "z2", "bool2", "pz2")]
    for r in run_suite("all", 0, structures):
        assert r.ok, (r.suite, r.counterexamples[:3])


def test_every_suite_applies_somewhere_at_size_4():
    for r in run_suite("all", 4):
        assert r.relevant > 0, r.suite


def test_unknown_suite():
    with pytest.raises(SemanticError):
        run_suite("nope", 2)
    assert "balanced" in suite_names()


def test_fibrant_suite_detects_a_wrong_verdict(monkeypatch):
    monkeypatch.setattr(oracles, "fibrant_report", lambda A, I: holds("fibrant"))
    (r,) = run_suite("fibrant-steady", 4)
    assert not r.ok


def test_H_suite_detects_a_wrong_verdict(monkeypatch):
    real = oracles.check_condition_H

    def broken(A):
        out = dict(real(A))
        out["H3"] = fails("H3", None) if out["H3"] else holds("H3")
        return out

    monkeypatch.setattr(oracles, "check_condition_H", broken)
    (r,) = run_suite("H-dependencies", 4)
    assert not r.ok


def test_result_json():
    (r,) = run_suite("balanced", 2)
    doc = r.to_json()
    assert doc["suite"] == "balanced" and doc["checked"] == 4 and doc["counterexamples"] == []
