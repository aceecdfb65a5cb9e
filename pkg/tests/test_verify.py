from fractions import Fraction as F

import pytest

from polyhg.scalars import DomainError
from polyhg.verify import (
    CheckEntry,
    Report,
    get_suite,
    list_suites,
    parse_report,
    run_suite,
    serialize,
)


def test_catalog_size_and_lookup():
    suites = list_suites()
    assert len(suites) == 17
    names = {s.name for s in suites}
    assert "qleg-basics" in names and "chain-basics" in names
    assert get_suite("nosuch") is None
    for s in suites:
        assert s.title
        assert s.runner is not None
        # every suite has a complete default configuration
        assert isinstance(s.sweep_defaults, dict)


def test_unknown_suite_raises():
    with pytest.raises(DomainError):
        run_suite("nosuch")


def test_param_validation_before_execution():
    with pytest.raises(DomainError):
        run_suite("qleg-lemma34", params={"q": F(3, 2)})
    with pytest.raises(DomainError):
        run_suite("qleg-lemma34", params={"bogus": F(1, 2)})
    with pytest.raises(DomainError):
        run_suite("qleg-lemma34", overrides={"bogus": 3})
    with pytest.raises(DomainError):
        run_suite("qleg-lemma34", precision=32)


def test_poll_thm25_point_run_passes():
    rep = run_suite("poll-thm25", params={"alpha": F(0), "lambda": F(1, 4), "nu": F(0)})
    assert rep.overall == "pass"
    wit = " ".join(e.witness or "" for e in rep.entries)
    assert "4/21" in wit and "48/187" in wit


def test_qleg_lemma35_exact_entries():
    rep = run_suite("qleg-lemma35", params={"q": F(1, 2)}, overrides={"n_max": 100})
    assert rep.overall == "pass"
    claims = {e.claim: e for e in rep.entries}
    assert claims["haar-partial-sum-closed-form-exact"].status == "pass"
    assert claims["haar-partial-sum-strictly-below-majorant"].margin is not None


def test_appendix_a_point_run():
    rep = run_suite(
        "appendixA", params={"alpha": F(1, 10), "lambda": F(1, 20), "nu": F(1)}
    )
    assert rep.overall == "pass"
    claims = [e.claim for e in rep.entries]
    assert "coefficients-below-nu-zero-within-crossover" in claims


def test_default_poll_thm25_reports_known_corner():
    # the limit-closeness tolerance is unattainable at the largest coupling
    # in the default grid; the suite must say so rather than hide it
    rep = run_suite("poll-thm25", overrides={"N": 500})
    by_claim = {e.claim: e for e in rep.entries}
    assert by_claim["coefficients-strictly-increasing"].status == "pass"
    assert by_claim["coefficients-approach-one-half"].status == "fail"
    assert "5" in by_claim["coefficients-approach-one-half"].witness


def test_report_exit_codes():
    rep = run_suite("qleg-lemma34")
    assert rep.overall == "pass" and rep.exit_code == 0
    rep2 = Report("x", {}, "rational", 256, [
        CheckEntry("a", "b", "r", "indeterminate"),
        CheckEntry("c", "d", "r", "pass"),
    ])
    assert rep2.overall == "indeterminate" and rep2.exit_code == 2
    rep3 = Report("x", {}, "rational", 256, [
        CheckEntry("a", "b", "r", "fail"),
        CheckEntry("c", "d", "r", "indeterminate"),
    ])
    assert rep3.overall == "fail" and rep3.exit_code == 1


def test_empty_report_serializes_and_passes():
    rep = Report("empty", {}, "rational", 256, [])
    assert rep.overall == "pass"
    data = serialize(rep)
    assert parse_report(data) == rep


def test_serialization_roundtrip():
    rep = run_suite("qleg-lemma34")
    data = serialize(rep)
    back = parse_report(data)
    assert back == rep  # runtimes excluded on both sides of the comparison


def test_serialization_deterministic():
    a = serialize(run_suite("qleg-lemma34"))
    b = serialize(run_suite("qleg-lemma34"))
    assert a == b
    c = serialize(run_suite("chain-basics", overrides={"trials": 50}))
    d = serialize(run_suite("chain-basics", overrides={"trials": 50}))
    assert c == d


def test_margin_fields_present_for_inequality_entries():
    rep = run_suite("qleg-lemma33", params={"q": F(1, 2)}, overrides={"n_max": 2, "k_max": 5})
    inequality_claims = [e for e in rep.entries if "exceeds" in e.claim or "approaches" in e.claim]
    assert inequality_claims
    for e in inequality_claims:
        assert e.margin is not None


def test_csv_serialization():
    rep = run_suite("qleg-lemma34")
    rows = serialize(rep, "csv").decode().strip().splitlines()
    assert rows[0] == "claim,anchor,range,status,margin,witness"
    assert len(rows) == 1 + len(rep.entries)


def test_seed_override_changes_random_trials_reproducibly():
    a = serialize(run_suite("chain-basics", overrides={"trials": 20, "seed": 7}))
    b = serialize(run_suite("chain-basics", overrides={"trials": 20, "seed": 7}))
    assert a == b
