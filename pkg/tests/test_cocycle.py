import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import Letter, NcPoly, a, d_inv, x
from app.services.twist.cocycle import (
    CocycleSpec,
    chart_permutation,
    eval_gamma,
    Twist,
    TwistMode,
    format_weight,
    letter_weights,
    parse_theta,
    permute_weight,
    twisted_product,
    weights,
)
from app.utils.errors import PresentationError


def test_parse_theta():
    lines = ["1 2 1", "1 3 g^2  # squared", "", "2 3 -1"]
    assert parse_theta(lines) == {(1, 2): 1, (1, 3): 2, (2, 3): -1}


@pytest.mark.parametrize("line", ["1 2", "2 1 3", "1 2 x", "1 1 2"])
def test_parse_theta_rejects_malformed_lines(line):
    with pytest.raises(PresentationError):
        parse_theta([line])


def test_chart_permutation_and_permuted_weights():
    assert chart_permutation(3, 1) == (1, 2, 3)
    assert chart_permutation(3, 2) == (2, 1, 3)
    assert chart_permutation(3, 3) == (3, 1, 2)
    assert chart_permutation(4, 3) == (3, 1, 2, 4)
    assert permute_weight((1, 0, 0), (2, 1, 3)) == (0, 1, 0)


def test_letter_weights():
    assert letter_weights(a(2, 1), 2) == ((0, 1), (1, 0))
    assert letter_weights(d_inv(2), 3) == ((0, -1, 0), (-1, 0, 0))
    assert letter_weights(x(3), 3) == ((0, 0, 1), (1, 0, 0))
    with pytest.raises(PresentationError):
        letter_weights(Letter("z"), 2)


def test_format_weight():
    assert format_weight((1, 0)) == "t1"
    assert format_weight((2, 2)) == "1"
    assert format_weight((0, 2, 1)) == "t2^2*t3"


def test_free_cocycle_is_antisymmetric():
    gamma = CocycleSpec.free(2)
    assert gamma((1, 0), (0, 1)) == Scalar.g(1, 2)
    assert gamma((0, 1), (1, 0)) == Scalar.g(1, 2, -1)
    assert gamma((1, 0), (1, 0)) == Scalar.one()


def test_balanced_cocycle():
    assert CocycleSpec.balanced(3).is_balanced()
    assert not CocycleSpec.free(3).is_balanced()
    assert CocycleSpec.balanced(2)((1, 0), (0, 1)) == Scalar.one()


def test_substituted_cocycle_raises_phases_to_powers():
    gamma = CocycleSpec.free(2).substituted({(1, 2): 3})
    assert gamma((1, 0), (0, 1)) == Scalar.g(1, 2, 3)


def test_word_phase_by_mode():
    word = (a(1, 1), a(1, 2))
    assert Twist.from_cocycle(CocycleSpec.free(2), TwistMode.GAMMA).word_phase(word) == Scalar.g(1, 2, -1)
    assert Twist.from_cocycle(CocycleSpec.free(2), TwistMode.SIGMA).word_phase(word) == Scalar.one()


def test_to_twisted_inverts_from_twisted():
    twist = Twist.from_cocycle(CocycleSpec.free(2))
    poly = NcPoly.word((a(1, 2), a(2, 1))) + NcPoly.word((a(2, 2), a(1, 1)), Scalar.q())
    assert twist.from_twisted(twist.to_twisted(poly)) == poly


def test_twisted_product_in_matrix_algebra(mq2):
    twist = Twist.from_cocycle(CocycleSpec.free(2), TwistMode.GAMMA)
    a11, a12 = NcPoly.letter(a(1, 1)), NcPoly.letter(a(1, 2))
    assert twisted_product(twist, a11, a12, mq2.presentation) == NcPoly.word((a(1, 1), a(1, 2)), Scalar.g(1, 2, -1))
    expected = NcPoly.word((a(1, 1), a(1, 2)), Scalar.monomial(1, 1, {(1, 2): 1}))
    assert twisted_product(twist, a12, a11, mq2.presentation) == expected


def test_word_weights_add_up():
    assert weights((a(1, 2), a(2, 1)), 2) == ((1, 1), (1, 1))
    assert weights((d_inv(2), a(2, 2)), 2) == ((0, 0), (-1, 1))
    assert weights((), 3) == ((0, 0, 0), (0, 0, 0))


def test_eval_gamma_on_a_permuted_cocycle():
    gamma = CocycleSpec.free(3)
    assert eval_gamma(gamma, (1, 0, 0), (0, 0, 1)) == Scalar.g(1, 3)
    cycled = gamma.permuted(chart_permutation(3, 3))
    assert eval_gamma(cycled, (1, 0, 0), (0, 0, 1)) == Scalar.g(2, 3, -1)
