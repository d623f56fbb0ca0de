import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import (
    EMPTY,
    NcPoly,
    TensorPoly,
    a,
    d_inv,
    format_word,
    p,
    tensor_mul,
    word_degree,
)
from app.utils.errors import TensorMismatchError


def test_letters_and_words():
    assert format_word(EMPTY) == "1"
    assert format_word((a(1, 2), d_inv(1))) == "a[1,2]*d[1]^-1"
    assert word_degree((a(1, 1), a(2, 1), d_inv(1))) == 1
    assert d_inv(2).is_inverse and not p(1, 2).is_inverse


def test_polynomial_arithmetic_does_not_reduce():
    u = NcPoly.letter(a(2, 1))
    v = NcPoly.letter(a(1, 1))
    product = u * v
    assert product == NcPoly.word((a(2, 1), a(1, 1)))
    assert (product - product).is_zero()
    assert (u + v).coefficient((a(1, 1),)) == Scalar.one()
    assert (u ** 2).max_length() == 2
    assert 3 * u == u.scale(3)


def test_tensor_mul_concatenates_legs(mq2):
    legs = (mq2.presentation, mq2.presentation)
    left = TensorPoly.from_polys(legs, [NcPoly.letter(a(2, 1)), NcPoly.letter(a(1, 2))])
    right = TensorPoly.from_polys(legs, [NcPoly.letter(a(1, 1)), NcPoly.one()])
    product = tensor_mul(left, right)
    assert product == TensorPoly(legs, {((a(2, 1), a(1, 1)), (a(1, 2),)): 1})
    assert product.reduced() == TensorPoly(legs, {((a(1, 1), a(2, 1)), (a(1, 2),)): Scalar.q()})
    assert left * TensorPoly.unit(legs) == left


def test_tensor_shape_errors(mq2, pq2):
    with pytest.raises(TensorMismatchError):
        TensorPoly(())
    with pytest.raises(TensorMismatchError):
        TensorPoly((mq2.presentation,), {((a(1, 1),), (a(1, 1),)): 1})
    with pytest.raises(TensorMismatchError):
        TensorPoly.from_polys((mq2.presentation,), [NcPoly.one(), NcPoly.one()])
    with pytest.raises(TensorMismatchError):
        tensor_mul(TensorPoly.unit((mq2.presentation,)), TensorPoly.unit((mq2.presentation, mq2.presentation)))
    with pytest.raises(TensorMismatchError):
        tensor_mul(TensorPoly.unit((mq2.presentation,)), TensorPoly.unit((pq2.presentation,)))
