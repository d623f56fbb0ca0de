from pathlib import Path

import orjson
import pytest

from app.services.verification.fixture_store import FixtureStore, check_fixture, load_theta, parse_fixtures
from app.services.verification.report import SuiteReport
from app.utils.errors import PresentationError

FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"


def test_parse_fixtures():
    lines = ["# quantum plane rows", "@algebra mq 2", "", "a[1,2]*a[1,1] => q*a[1,1]*a[1,2]  # same row"]
    (fixture,) = parse_fixtures(lines)
    assert fixture.label == "<fixtures>:4"
    assert fixture.spec.name == "mq2"
    assert fixture.expression == "a[1,2]*a[1,1]"
    assert fixture.expected == "q*a[1,1]*a[1,2]"
    ok, found = check_fixture(fixture)
    assert ok
    assert found == "q*a[1,1]*a[1,2]"


def test_twisted_header():
    (fixture,) = parse_fixtures(["@algebra projq 3 twisted", "x[2]*x[1] => q*g[1,2]^-2*x[1]*x[2]"])
    assert fixture.spec.twist
    assert check_fixture(fixture)[0]


@pytest.mark.parametrize(
    "lines",
    [
        ["@algebra mq"],
        ["@algebra uq 2"],
        ["@algebra mq two"],
        ["a[1,1] => a[1,1]"],
        ["@algebra mq 2", "a[1,1] = a[1,1]"],
    ],
)
def test_malformed_fixture_files(lines):
    with pytest.raises(PresentationError):
        parse_fixtures(lines)


def test_mismatch_is_reported_with_its_location():
    fixtures = parse_fixtures(["@algebra mq 2", "a[1,2]*a[1,1] => a[1,1]*a[1,2]"], "wrong.txt")
    verdict = FixtureStore(str(FIXTURES_DIR)).verify(fixtures)
    assert not verdict.passed
    assert verdict.witness.startswith("wrong.txt:2")


def test_parse_errors_inside_fixtures_fail_the_corpus():
    fixtures = parse_fixtures(["@algebra mq 2", "a[3,1] => 0"], "range.txt")
    verdict = FixtureStore(str(FIXTURES_DIR)).verify(fixtures)
    assert not verdict.passed
    assert verdict.witness.startswith("range.txt:2")


def test_corpus_reduces_to_recorded_normal_forms():
    store = FixtureStore(str(FIXTURES_DIR))
    assert [path.name for path in store.fixture_files()] == ["matrix.txt", "parabolic.txt", "special_linear.txt"]
    fixtures = store.load_all()
    verdict = store.verify(fixtures)
    assert verdict.passed, verdict.witness
    assert verdict.checked == len(fixtures)


def test_missing_fixture_dir(tmp_path):
    assert FixtureStore(str(tmp_path / "absent")).fixture_files() == []


def test_save_report(tmp_path):
    store = FixtureStore(reports_dir=str(tmp_path))
    path = store.save_report(SuiteReport(suite="det", parameters={"n": 2}))
    data = orjson.loads(Path(path).read_bytes())
    assert Path(path).name.startswith("det_report_")
    assert data["suite"] == "det"
    assert data["result"] == "pass"


def test_load_theta():
    assert load_theta(str(FIXTURES_DIR / "theta_generic.theta")) == {(1, 2): 1, (1, 3): 2, (2, 3): -1}
    with pytest.raises(PresentationError):
        load_theta(str(FIXTURES_DIR / "missing.theta"))
