import json
from functools import partial

from finalg.algebra import AiSemiring
from finalg.catalog import end_chain
from finalg.suite import (
    FAIL,
    PASS,
    SKIPPED,
    Check,
    Settings,
    axiom_suites,
    resolve,
    run_checks,
    run_suite,
    suite_checks,
)


def test_default_suite_passes_and_is_deterministic():
    a = run_suite()
    b = run_suite()
    assert a.passed
    assert a.to_json(timing=False) == b.to_json(timing=False)
    assert a.to_text(timing=False) == b.to_text(timing=False)
    doc = json.loads(a.to_json())
    assert doc["verdict"] == PASS and all("elapsed" in c for c in doc["checks"])


def test_parallel_run_keeps_declaration_order():
    checks = suite_checks(Settings(n_max=2))
    serial = run_checks(checks)
    parallel = run_checks(checks, jobs=2)
    assert serial.canonical() == parallel.canonical()


def test_corrupted_table_fails_with_named_axiom():
    R = end_chain(3)
    add = R.add.copy()
    add[1, 2] = 0
    bad = AiSemiring(labels=R.labels, mul=R.mul, add=add)
    report = run_checks([Check("axioms", "corrupted fixture", partial(axiom_suites, [("bad", bad)]))])
    assert not report.passed
    c = report.checks[0]
    assert c.status == FAIL and "commutativity" in c.detail


def test_crashing_check_is_reported():
    def boom():
        raise RuntimeError("kaput")
    report = run_checks([Check("boom", "", boom)])
    assert report.checks[0].status == FAIL and "kaput" in report.checks[0].detail


def test_only_filters_and_skips():
    report = run_suite(only=["sn-construction"])
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["sn-construction:2"] == PASS and statuses["sn-construction:3"] == PASS
    assert statuses["catalog-sizes"] == SKIPPED
    assert report.passed


def test_resolve_names():
    assert resolve("end0-chain:3").size == 6
    assert resolve("tn:2:1").size == 99
    for bad in ("sn", "end-chain:x", "zzz"):
        try:
            resolve(bad)
        except KeyError:
            continue
        raise AssertionError(bad)
