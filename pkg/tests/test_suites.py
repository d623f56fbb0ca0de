from fractions import Fraction

import pytest

from app.services.verification.suite_config import get_suite
from app.services.verification.suites import SuiteRunner, corrupted_manin, run_suite
from app.services.quantum.hopf import check_relations_respected
from app.utils.errors import QBundleError


@pytest.mark.asyncio
async def test_det_suite_at_rank_two(seed_zero):
    report = await run_suite("det", n=2)
    assert report.passed
    ids = [check.id for check in report.sorted().checks]
    assert ids == ["det.central2", "det.forms2", "det.grouplike2", "det.laplace2", "det.section2"]
    assert report.parameters == {"n": 2, "degree": None, "k": None, "q": None}


@pytest.mark.asyncio
async def test_seed_is_echoed(seed_zero):
    report = await SuiteRunner(n=2, seed=5).run("factorization")
    assert report.seed == 5
    assert report.passed


@pytest.mark.asyncio
async def test_unknown_suite():
    with pytest.raises(QBundleError):
        await run_suite("frobnicate", n=2)


@pytest.mark.asyncio
async def test_chart_index_out_of_range():
    with pytest.raises(QBundleError):
        await SuiteRunner(n=2, k=3).run("canonical")


@pytest.mark.asyncio
async def test_single_chart_canonical_suite():
    report = await SuiteRunner(n=2, degree=2, k=1).run("canonical")
    assert [check.id for check in report.checks] == ["canonical.chart1.n2"]
    assert report.passed


@pytest.mark.asyncio
async def test_classical_limit_depends_on_q():
    at_one = await SuiteRunner(n=2).run("classical")
    assert at_one.passed
    assert any(check.id == "classical.coaction2" for check in at_one.checks)
    at_two = await SuiteRunner(n=2, q_value=Fraction(2)).run("classical")
    assert not at_two.passed
    assert at_two.parameters["q"] == "2"


@pytest.mark.asyncio
async def test_fixture_corpus_suite():
    report = await run_suite("fixtures")
    assert report.passed
    assert report.checks[0].id == "fixtures.corpus"


def test_corrupted_manin_coefficient_is_detected():
    verdict = check_relations_respected(corrupted_manin(2))
    assert not verdict.passed
    assert verdict.witness


@pytest.mark.slow
@pytest.mark.asyncio
async def test_negative_controls():
    report = await run_suite("negative", n=2)
    assert report.passed


def test_heavy_suites_stay_at_the_smallest_size_unless_asked():
    config = get_suite("sheaf")
    light = [check_id for check_id, _ in SuiteRunner().checks_for(config)]
    full = [check_id for check_id, _ in SuiteRunner(heavy=True).checks_for(config)]
    assert light and all(check_id.endswith("2") for check_id in light)
    assert set(light) < set(full)
    assert any(check_id.endswith("3") for check_id in full)
    pinned = [check_id for check_id, _ in SuiteRunner(n=3).checks_for(config)]
    assert pinned and all(not check_id.endswith("2") for check_id in pinned)


@pytest.mark.asyncio
async def test_suite_times_are_recorded(seed_zero):
    report = await run_suite("det", n=2)
    assert set(report.suite_times) == {"det"}
    assert report.suite_times["det"] >= 0
