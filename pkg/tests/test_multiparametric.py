import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import NcPoly, a, x
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build_named
from app.services.twist.cocycle import CocycleSpec, Twist, TwistMode, twisted_product
from app.services.twist.multiparametric import (
    build_multiparametric,
    build_twisted,
    check_associativity,
    check_cleaving_weights,
    check_cocycle_identities,
    check_projective_relation,
    check_sigma_nontrivial,
    check_trivial_specialization,
    check_twisted_algebra,
    check_twisted_cleaving,
    check_twisted_inverse,
    _twice_twisted,
    check_twists_commute,
    default_cocycle,
    default_twist,
    twisted_presentation,
    verify_twist_theorems,
)
from app.utils.errors import PresentationError


def test_twisted_projective_rule():
    pres = build_named("projq", 2, twist=True).presentation
    (rule,) = pres.rules
    assert rule.lhs == (x(2), x(1))
    assert rule.rhs == NcPoly.word((x(1), x(2)), Scalar.monomial(1, 1, {(1, 2): -2}))


@pytest.mark.parametrize("n", [2, 3])
def test_projective_relation(n):
    assert check_projective_relation(n).passed


def test_default_cocycles():
    assert default_cocycle(AlgebraFamily.MN, 3).label == "free"
    assert default_cocycle(AlgebraFamily.SLN, 3).label == "balanced"


@pytest.mark.parametrize("cocycle", [CocycleSpec.free(3), CocycleSpec.balanced(3)])
def test_cocycle_identities(cocycle, seed_zero):
    assert check_cocycle_identities(cocycle).passed


@pytest.mark.parametrize("family", [AlgebraFamily.MN, AlgebraFamily.SLN, AlgebraFamily.P])
def test_twisted_algebras_at_rank_two(family):
    for name, verdict in check_twisted_algebra(AlgebraSpec(family, 2), 4).items():
        assert verdict.passed, f"{name}: {verdict.witness}"


def test_trivial_specialization_of_matrix_algebra():
    assert check_trivial_specialization(AlgebraSpec(AlgebraFamily.MN, 3)).passed


def test_twisted_build_arguments(chart1):
    with pytest.raises(PresentationError):
        build_twisted(AlgebraSpec(AlgebraFamily.MN, 2))
    with pytest.raises(PresentationError):
        twisted_presentation(chart1.presentation, default_twist(AlgebraFamily.SLN, 2))


def test_twisted_products(mq2, sl2, seed_zero):
    assert check_associativity(default_twist(AlgebraFamily.MN, 2), mq2.presentation, 2).passed
    assert check_twists_commute(2, 2).passed


def test_twists_commute_at_rank_three(seed_zero):
    assert check_twists_commute(3, 2).passed


def test_sigma_on_gamma_twisted_algebra_matches_direct_twist():
    pres = build_named("slq", 3).presentation
    balanced = CocycleSpec.balanced(3)
    gamma = Twist.from_cocycle(balanced, TwistMode.GAMMA)
    sigma = Twist.from_cocycle(balanced, TwistMode.SIGMA)
    both = Twist.from_cocycle(balanced)
    inner = twisted_presentation(pres, gamma)
    pa, pb = NcPoly.letter(a(1, 2)), NcPoly.letter(a(2, 1))
    direct = twisted_product(both, pa, pb, pres)
    assert pres.same(_twice_twisted(gamma, sigma, inner, pa, pb), direct)
    assert pres.same(_twice_twisted(gamma, sigma, inner, pb, pa), twisted_product(both, pb, pa, pres))
    # the Σ product alone misses the Γ phase
    assert not pres.same(twisted_product(sigma, pa, pb, pres), direct)


def test_twisted_bundle_at_rank_two(seed_zero):
    assert check_cleaving_weights(2).passed
    assert check_twisted_cleaving(2, 1).passed
    assert check_twisted_inverse(2, 2, 2).passed


@pytest.mark.parametrize("i", [1, 2])
def test_twisted_inverse_on_words_with_hidden_denominators(i, seed_zero):
    assert check_twisted_inverse(2, i, 3).passed


def test_sigma_cocycle_is_skipped_at_rank_two():
    assert check_sigma_nontrivial(2).status == "skip"


@pytest.mark.slow
def test_sigma_cocycle_is_nontrivial_at_rank_three():
    verdict = check_sigma_nontrivial(3)
    assert verdict.passed
    assert verdict.details["nontrivial_pairs"]


def test_build_multiparametric_family():
    algebras = build_multiparametric(2)
    assert sorted(algebras) == ["p", "projective", "sl"]
    assert algebras["sl"].spec == AlgebraSpec(AlgebraFamily.SLN, 2, twist=True)
    assert algebras["projective"].spec.twist


def test_twisted_bundle_statements_at_rank_two(seed_zero):
    verdicts = verify_twist_theorems(2, 2)
    assert sorted(verdicts) == ["cleaving", "cocycle", "inverse", "sigma_cocycle", "weights"]
    assert verdicts["sigma_cocycle"].status == "skip"
    for name, verdict in verdicts.items():
        assert verdict.status in ("pass", "skip"), f"{name}: {verdict.witness}"


@pytest.mark.slow
def test_twisted_cleaving_on_the_last_chart_at_rank_three():
    assert check_cleaving_weights(3).passed
    assert check_twisted_cleaving(3, 3).passed
