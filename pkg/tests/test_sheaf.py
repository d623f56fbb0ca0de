import pytest

from app.services.bundle.sheaf import (
    build_sheaf,
    chart_name,
    check_coinvariant_subsheaf,
    check_comodule_morphisms,
    check_functoriality,
    check_injectivity,
    global_sections_pullback,
    sheaf_model,
)
from app.utils.errors import LocalizationError


@pytest.fixture
def model():
    return sheaf_model(2)


def test_poset_and_restrictions(model):
    summary = model.describe()
    assert summary["objects"] == ["global", "U1", "U2", "U12"]
    assert len(summary["restrictions"]) == 5
    assert chart_name(frozenset({1, 2})) == "U12"


def test_restrictions_are_functorial_comodule_maps(model, seed_zero):
    assert check_functoriality(model).passed
    assert check_comodule_morphisms(model).passed
    assert check_injectivity(model, 2).passed


def test_coinvariant_subsheaf(model):
    verdict = check_coinvariant_subsheaf(model, 1)
    assert verdict.passed
    assert verdict.details["U1"] == {"kernel": 2, "expected": 2}


def test_global_sections_are_the_pullback():
    verdict = global_sections_pullback(2)
    assert verdict.passed
    assert verdict.details["equalizer_dimension"] == verdict.details["global_dimension"]


def test_sheaf_arguments_are_validated():
    with pytest.raises(LocalizationError):
        build_sheaf(1)
    with pytest.raises(LocalizationError):
        global_sections_pullback(2, n=3)
