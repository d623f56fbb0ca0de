from app.services.verification.suite_config import (
    VERIFICATION_SUITES,
    get_enabled_suites,
    get_suite,
    get_suite_names,
    get_suites_for_module,
    validate_suite_configs,
)
from app.services.verification.suites import SUITE_CHECKS


def test_registry_is_valid():
    validation = validate_suite_configs()
    assert validation["errors"] == []
    assert validation["total_suites"] == len(VERIFICATION_SUITES)
    assert "twist" in validation["modules"]


def test_every_suite_has_checks():
    assert set(get_suite_names()) == set(SUITE_CHECKS)
    assert len(get_enabled_suites()) == len(VERIFICATION_SUITES)


def test_lookup():
    assert get_suite("cleaving").per_chart
    assert get_suite("canonical").parameters["degree"] == 2
    assert not get_suite("det").per_chart
    assert get_suite("missing") is None
    assert {suite.name for suite in get_suites_for_module("twist")} == {"confluence", "twist", "fixtures"}
