import pytest

from app.services.algebra.coeff import Scalar
from app.services.bundle.cleaving import (
    build_cleaving,
    canonical_map_section,
    check_cocycle_coinvariant,
    check_determinant_factorization,
    check_relations,
    classical_coaction_values,
    cleaving,
    crossed_cocycle,
    is_trivial,
    minor_rows,
    smash_product_witness,
    verify_cleaving,
    verify_trivialization,
)
from app.utils.errors import PresentationError


@pytest.mark.parametrize("k", [1, 2])
def test_cleaving_properties_at_rank_two(k):
    verdicts = verify_cleaving(2, k)
    assert set(verdicts) == {"relations", "comodule", "convolution"}
    for name, verdict in verdicts.items():
        assert verdict.passed, f"{name}: {verdict.witness}"


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2, 3])
def test_cleaving_properties_at_rank_three(k):
    for verdict in verify_cleaving(3, k).values():
        assert verdict.passed, verdict.witness


@pytest.mark.slow
def test_rescaled_row_breaks_the_relations():
    assert not verify_cleaving(3, 3, corrupt=True)["relations"].passed


def test_minor_rows_move_the_chart_row_to_the_front():
    assert minor_rows(1, 2) == (1, 2)
    assert minor_rows(1, 3) == (1, 3)
    assert minor_rows(2, 2) == (1, 2)
    assert minor_rows(2, 3) == (2, 3)
    assert minor_rows(3, 2) == (1, 3)
    assert minor_rows(3, 3) == (2, 3)


@pytest.mark.slow
def test_last_chart_at_rank_three_keeps_the_q_commutation_of_its_images():
    cm = cleaving(3, 3)
    chart = cm.chart
    p22, p32 = cm(cm.structure.presentation.parse("p[2,2]")), cm(cm.structure.presentation.parse("p[3,2]"))
    assert chart.same(p32 * p22, (p22 * p32).scale(Scalar.q()))
    assert check_relations(cm).passed


def test_rescaled_row_breaks_the_relations_at_rank_two():
    assert not verify_cleaving(2, 2, corrupt=True)["relations"].passed


def test_chart_index_is_validated():
    with pytest.raises(PresentationError):
        build_cleaving(2, 3)
    with pytest.raises(PresentationError):
        build_cleaving(2, 0)


def test_images_on_first_chart():
    table = cleaving(2, 1).table()
    assert table["p[1,1]^-1"] == "d[1]^-1"
    assert table["p[1,1]"] == "a[1,1]"
    assert table["p[1,2]"] == "a[1,2]"


@pytest.mark.parametrize("n", [2, 3])
def test_determinant_factorization(n):
    assert check_determinant_factorization(n).passed


def test_trivialization_and_canonical_section(seed_zero):
    for name, verdict in verify_trivialization(2, 1, 2).items():
        assert verdict.passed, f"{name}: {verdict.witness}"
    assert canonical_map_section(2, 2, 2).passed


def test_crossed_cocycle_of_an_algebra_map_is_trivial():
    cm = cleaving(2, 1)
    tau = crossed_cocycle(cm)
    assert is_trivial(tau)
    assert tau.nontrivial_pairs() == []
    assert check_cocycle_coinvariant(cm, tau).passed


def test_coinvariants_do_not_commute_with_the_cleaving_image():
    assert smash_product_witness(cleaving(2, 1)) is not None


def test_classical_coaction_values():
    values = classical_coaction_values(2)
    assert values["d[1]^-1"].endswith("d[1]^-1 (x) p[1,1]^-1")
    assert set(values) >= {"a[1,1]", "a[2,2]"}
