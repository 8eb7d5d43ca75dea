"""The suite result contract: failures carry the offending seed, and the
driver exit code reflects them."""

from panache.suites import SUITES, SuiteResult, run_suite


def test_suite_result_failures_name_seeds():
    res = SuiteResult("demo")
    res.record(True, recipe="r", seed=3)
    res.record(False, recipe="r", seed=7, p=-2)
    assert not res.ok
    payload = res.as_dict()
    assert payload["failures"][0]["seed"] == 7
    assert payload["passed"] == 1 and payload["total"] == 2


def test_all_suites_registered_and_green_at_small_counts():
    for name in sorted(SUITES):
        res = run_suite(name, count=6, seed=2)
        assert res.ok, (name, res.failures[:2])
        assert res.total > 0


def test_suites_deterministic_in_seed():
    a = run_suite("up-kernel", count=8, seed=5).as_dict()
    b = run_suite("up-kernel", count=8, seed=5).as_dict()
    assert a == b
