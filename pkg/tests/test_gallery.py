import json

import pytest

from bhcheck.gallery import SCENARIOS, UnknownScenarioError, run_scenario


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_scenario_passes(name):
    rep = run_scenario(name)
    failed = [e.label for e in rep.expectations if not e.ok]
    assert rep.passed, failed


def test_lemma_failure_contents():
    rep = run_scenario("banach_lemma_failure")
    by = {e.label: e for e in rep.expectations}
    assert by["lip_gradient best constant"].observed == pytest.approx(2.0, rel=1e-3)
    assert by["one_sided_lip best constant"].observed == pytest.approx(1.0, rel=1e-3)
    assert all(e.source == "published-example" for e in rep.expectations)


def test_theorem_failure_witness():
    rep = run_scenario("banach_theorem_failure")
    wit = [e for e in rep.expectations if e.label.startswith("aux_convexity witness")]
    assert [e.observed for e in wit] == [-0.5] * 4


def test_hilbert_sanity_margins_zero():
    rep = run_scenario("hilbert_sanity")
    zero = [e for e in rep.expectations if e.label.endswith("worst margin is zero")]
    assert len(zero) == 10
    assert all(abs(e.observed) <= 1e-9 for e in zero)


def test_reports_are_reproducible():
    a = json.dumps(run_scenario("banach_lemma_failure").to_dict())
    b = json.dumps(run_scenario("banach_lemma_failure").to_dict())
    assert a == b


def test_unknown_scenario():
    with pytest.raises(UnknownScenarioError):
        run_scenario("unknown_name")
