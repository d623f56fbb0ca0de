import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import NcPoly, a, t, t_inv, x
from app.services.quantum.qgroups import (
    AlgebraFamily,
    AlgebraSpec,
    build,
    build_named,
    check_det_central,
    check_det_forms,
    check_det_grouplike,
    check_laplace,
    check_minor_coproduct,
    check_quantum_section,
    describe,
    grassmannian_check,
    permutation_length,
    project_pi,
    qdet,
    qminor,
)
from app.utils.errors import HopfStructureError, PresentationError


def test_spec_validation_and_names():
    with pytest.raises(PresentationError):
        AlgebraSpec(AlgebraFamily.MN, 1)
    with pytest.raises(PresentationError):
        AlgebraSpec(AlgebraFamily.MN, 3, r=3)
    assert AlgebraSpec(AlgebraFamily.MN, 3, r=1).name == "mq3r1"
    assert AlgebraSpec(AlgebraFamily.PROJECTIVE, 3, twist=True).name == "projq3_twisted"
    with pytest.raises(ValueError):
        build_named("uq", 2)


def test_determinant_of_matrix_algebra(mq2):
    expected = NcPoly.word((a(1, 1), a(2, 2))) - NcPoly.word((a(1, 2), a(2, 1)), Scalar.q(-1))
    assert qdet(mq2.presentation) == expected


@pytest.mark.parametrize("check", [check_det_central, check_det_grouplike, check_det_forms, check_laplace])
def test_determinant_properties(check, mq2, mq3):
    assert check(mq2).passed
    assert check(mq3).passed


def test_minor_coproduct(mq3):
    verdict = check_minor_coproduct(mq3, 2)
    assert verdict.passed
    assert verdict.checked == 9


def test_special_linear_determinant_is_one(sl2):
    assert qdet(sl2.presentation) == NcPoly.one()
    assert check_det_grouplike(sl2).passed


def test_minor_indices_are_validated(mq3):
    with pytest.raises(PresentationError):
        qminor(mq3.presentation, [2, 1], [1, 2])
    with pytest.raises(PresentationError):
        qminor(mq3.presentation, [1, 2], [1])
    with pytest.raises(PresentationError):
        qminor(mq3.presentation, [1, 4], [1, 2])


def test_permutation_length():
    assert permutation_length((0, 1, 2)) == 0
    assert permutation_length((1, 0, 2)) == 1
    assert permutation_length((2, 1, 0)) == 3


def test_describe_reports_structure(mq2, sl2):
    assert describe(sl2)["hopf"] == "hopf"
    assert describe(mq2)["hopf"] == "bialgebra"
    summary = describe(build_named("projq", 3))
    assert summary["hopf"] == "none"
    assert summary["generators"] == ["x[1]", "x[2]", "x[3]"]


def test_projective_commutation():
    projq = build_named("projq", 3)
    assert projq.normal_form(NcPoly.word((x(3), x(1)))) == NcPoly.word((x(1), x(3)), Scalar.q())
    with pytest.raises(HopfStructureError):
        projq.require_hopf()


def test_torus_eliminates_last_generator():
    torus = build_named("torus", 2)
    assert torus.normal_form(NcPoly.letter(t(2))) == NcPoly.letter(t_inv(1))
    assert torus.normal_form(NcPoly.word((t(1), t(2)))) == NcPoly.one()


def test_projection_kills_first_column(sl2):
    assert project_pi(NcPoly.letter(a(2, 1)), 2).is_zero()
    assert not project_pi(NcPoly.letter(a(1, 2)), 2).is_zero()


def test_quantum_section():
    assert check_quantum_section(2).passed
    assert check_quantum_section(3).passed


@pytest.mark.parametrize("n, r", [(2, 1), (3, 1), (3, 2)])
def test_grassmannian_minors_are_semi_coinvariant(n, r):
    verdict = grassmannian_check(n, r)
    assert verdict.passed
    assert set(verdict.details["minors"].values()) == {"pass"}


def test_grassmannian_rejects_bad_rank():
    with pytest.raises(PresentationError):
        grassmannian_check(2, 2)


def test_builds_are_cached():
    assert build(AlgebraSpec(AlgebraFamily.SLN, 2)) is build(AlgebraSpec(AlgebraFamily.SLN, 2))
