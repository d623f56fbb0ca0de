from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.services.algebra.coeff import LAMBDA, Scalar, format_scalar, specialize, sum_scalars
from app.utils.errors import NonInvertibleScalarError, SpecializationError

monomials = st.builds(
    lambda coef, q_exp, g12, g13: Scalar.monomial(coef, q_exp, {(1, 2): g12, (1, 3): g13}),
    st.integers(-4, 4),
    st.integers(-3, 3),
    st.integers(-2, 2),
    st.integers(-1, 1),
)
scalars = st.lists(monomials, max_size=4).map(sum_scalars)
q_values = st.sampled_from([Fraction(1), Fraction(2), Fraction(-1, 3), Fraction(5, 7)])


def test_q_times_inverse_is_one():
    assert (Scalar.q() * Scalar.q(-1)).is_one()
    assert Scalar.q(3) / Scalar.q(2) == Scalar.q()


def test_lambda_text():
    assert str(LAMBDA) == "q^-1 - q"
    assert format_scalar(-LAMBDA) == "-q^-1 + q"
    assert str(Scalar.monomial(-2, 1)) == "-2*q"
    assert str(Scalar.zero()) == "0"
    assert str(Scalar.monomial(Fraction(1, 2), 0, {(1, 2): -2})) == "1/2*g[1,2]^-2"


def test_phase_symbols_are_antisymmetric():
    assert Scalar.g(2, 1) == Scalar.g(1, 2) ** -1
    assert Scalar.g(3, 3).is_one()
    assert (Scalar.g(1, 2) * Scalar.g(2, 1)).is_one()
    assert (Scalar.g(1, 3) * Scalar.q()).phase_symbols() == ((1, 3),)


def test_non_monomial_has_no_inverse():
    with pytest.raises(NonInvertibleScalarError):
        LAMBDA.inverse()
    with pytest.raises(NonInvertibleScalarError):
        Scalar.zero().inverse()


def test_specialize():
    assert specialize(LAMBDA, 1).is_zero()
    assert specialize(Scalar.q(2) + Scalar.g(1, 2), 3) == Scalar.rational(9) + Scalar.g(1, 2)
    assert specialize(Scalar.q() * Scalar.g(1, 2), 1, phases_to_one=True).is_one()
    with pytest.raises(SpecializationError):
        Scalar.q().specialize(0)


def test_substitute_phases():
    s = Scalar.g(1, 2, 2) + Scalar.g(2, 3)
    result = s.substitute_phases({(1, 2): Scalar.q()})
    assert result == Scalar.q(2) + Scalar.g(2, 3)


def test_rationals_compare_with_numbers():
    assert Scalar.rational(Fraction(3, 2)) == Fraction(3, 2)
    assert Scalar.one() == 1
    assert Scalar.q() + 0 == Scalar.q()


@given(scalars, scalars, scalars)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Scalar.zero()


@given(monomials.filter(lambda s: not s.is_zero()))
def test_monomial_inverse(m):
    assert (m * m.inverse()).is_one()


@given(scalars, scalars, q_values)
def test_specialize_is_a_ring_map(a, b, value):
    lhs = (a * b).specialize(value, phases_to_one=True)
    rhs = a.specialize(value, phases_to_one=True) * b.specialize(value, phases_to_one=True)
    assert lhs == rhs
    assert (a + b).specialize(value) == a.specialize(value) + b.specialize(value)
