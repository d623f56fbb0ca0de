import orjson

from app.services.algebra.checks import Verdict
from app.services.verification.report import SCHEMA_VERSION, CheckResult, SuiteReport


def verdict(ok: bool, statement: str = "statement") -> Verdict:
    v = Verdict(statement)
    v.record(ok, lambda: "witness text")
    return v


def make_report(order):
    report = SuiteReport(suite="demo", parameters={"n": 2, "degree": None}, seed=7)
    results = {
        "demo.b": CheckResult.from_verdict("demo.b", verdict(True), elapsed=0.25),
        "demo.a": CheckResult.from_verdict("demo.a", verdict(True), elapsed=1.5),
    }
    for key in order:
        report.add(results[key])
    return report


def test_checks_are_sorted_and_schema_is_present():
    data = make_report(["demo.b", "demo.a"]).to_dict()
    assert data["schema"] == SCHEMA_VERSION
    assert [check["id"] for check in data["checks"]] == ["demo.a", "demo.b"]
    assert data["result"] == "pass"
    assert data["seed"] == 7


def test_json_is_independent_of_completion_order():
    first = make_report(["demo.a", "demo.b"]).to_json()
    second = make_report(["demo.b", "demo.a"]).to_json()
    assert first == second
    assert orjson.loads(first)["suite"] == "demo"


def test_timings_are_opt_in():
    report = make_report(["demo.a", "demo.b"])
    assert all("elapsed" not in check for check in report.to_dict()["checks"])
    assert report.to_dict(timings=True)["checks"][0]["elapsed"] == 1.5


def test_suite_times_are_opt_in():
    report = make_report(["demo.a"])
    report.suite_times["demo"] = 2.25
    assert "suite_times" not in report.to_dict()
    assert report.to_dict(timings=True)["suite_times"] == {"demo": 2.25}
    assert "suite demo: 2.25s" in report.to_text(timings=True)
    assert "2.25s" not in report.to_text()


def test_failures_carry_witnesses_and_skips_do_not_fail():
    report = SuiteReport(suite="demo")
    report.add(CheckResult.from_verdict("demo.skip", Verdict("skipped").skip("not applicable")))
    assert report.passed
    report.add(CheckResult.from_verdict("demo.fail", verdict(False)))
    assert report.result == "fail"
    assert report.counts() == {"pass": 0, "fail": 1, "skip": 1}
    failed = next(check for check in report.checks if check.status == "fail")
    assert failed.witness == "witness text"
    text = report.to_text()
    assert "witness: witness text" in text
    assert "reason: not applicable" in text
    assert text.endswith("result: FAIL (0 passed, 1 failed, 1 skipped)")


def test_errors_become_failed_checks():
    result = CheckResult.from_error("demo.boom", ValueError("bad input"))
    assert result.status == "fail"
    assert result.witness == "ValueError: bad input"


def test_details_are_made_json_friendly():
    v = verdict(True)
    v.details["pairs"] = {(1, 2): {3, 1}}
    result = CheckResult.from_verdict("demo.details", v)
    assert result.details == {"pairs": {"(1, 2)": [1, 3]}}
    assert result.witness is None
