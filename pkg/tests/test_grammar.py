import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.algebra.coeff import LAMBDA, Scalar, sum_scalars
from app.services.algebra.freealg import DET_INV, P11_INV, NcPoly, a, d_inv, t, x
from app.services.algebra.grammar import FreeContext, parse, parse_lines
from app.services.algebra.rewrite import normal_words
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build
from app.utils.errors import GrammarError


def test_parse_product(mq2):
    assert mq2.parse("a[2,2]*a[1,1]") == NcPoly.word((a(2, 2), a(1, 1)))


def test_parse_scalars_and_signs():
    poly = parse("-2*q^-1*x[1] + (q^-1 - q)*x[2] + 3/4", FreeContext(2))
    expected = (
        NcPoly.word((x(1),), Scalar.monomial(-2, -1))
        + NcPoly.word((x(2),), LAMBDA)
        + NcPoly.constant(Scalar.rational(3) / 4)
    )
    assert poly == expected


def test_inverse_letters():
    context = FreeContext(3)
    assert parse("d[2]^-1", context) == NcPoly.letter(d_inv(2))
    assert parse("p[1,1]^-1", context) == NcPoly.letter(P11_INV)
    assert parse("det^-2", context) == NcPoly.word((DET_INV, DET_INV))
    assert parse("t[3]^2", context) == NcPoly.word((t(3), t(3)))
    assert parse("d[1]", context) == NcPoly.letter(a(1, 1))


def test_phase_symbols_need_distinct_indices():
    assert parse("g[2,1]", FreeContext(2)) == NcPoly.constant(Scalar.g(1, 2) ** -1)
    with pytest.raises(GrammarError):
        parse("g[1,1]", FreeContext(2))


@pytest.mark.parametrize(
    "text",
    ["", "   ", "a[1,1]*", "a[1,1] a[2,2]", "det", "a[1,2]^-1", "(a[1,1] + a[1,2])^-1", "1/0", "q^"],
)
def test_malformed_input(text, mq2):
    with pytest.raises(GrammarError):
        mq2.parse(text)


def test_index_out_of_range(mq2):
    with pytest.raises(GrammarError) as excinfo:
        mq2.parse("a[3,1]")
    assert "out of range" in str(excinfo.value)
    assert excinfo.value.position is not None


def test_letters_outside_the_algebra():
    pq2 = build(AlgebraSpec(AlgebraFamily.P, 2))
    with pytest.raises(GrammarError):
        pq2.parse("p[2,1]")
    mq2 = build(AlgebraSpec(AlgebraFamily.MN, 2))
    with pytest.raises(GrammarError):
        mq2.parse("d[1]^-1")


def test_parse_lines_skips_comments():
    polys = parse_lines(["# header", "", "x[1]*x[2]  # trailing", "q"], FreeContext(2))
    assert polys == [NcPoly.word((x(1), x(2))), NcPoly.constant(Scalar.q())]


def test_manin_normal_form_text(mq2):
    nf = mq2.normal_form(mq2.parse("a[2,2]*a[1,1]"))
    assert mq2.format(nf) == "a[1,1]*a[2,2] - (q^-1 - q)*a[1,2]*a[2,1]"


def test_format_of_zero_and_constants(mq2):
    assert mq2.format(NcPoly.zero()) == "0"
    assert mq2.format(NcPoly.constant(Scalar.q(-1))) == "q^-1"


def test_format_parse_round_trip(sl2):
    pres = sl2.presentation
    coefficients = [Scalar.one(), -Scalar.q(), LAMBDA, Scalar.monomial(2, -1, {(1, 2): 1})]
    words = normal_words(pres, 3)[:24]
    for index, word in enumerate(words):
        poly = NcPoly.word(word, coefficients[index % len(coefficients)])
        if index:
            poly = poly + NcPoly.word(words[index - 1])
        assert sl2.parse(pres.format(poly)) == poly


sl2_words = st.sampled_from(normal_words(build(AlgebraSpec(AlgebraFamily.SLN, 2)).presentation, 3))
coefficients = st.lists(
    st.builds(
        lambda coef, q_exp, g12: Scalar.monomial(coef, q_exp, {(1, 2): g12}),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        st.integers(-2, 2),
        st.integers(-1, 1),
    ),
    min_size=1,
    max_size=3,
).map(sum_scalars)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(sl2_words, coefficients), max_size=5))
def test_parse_inverts_format(terms):
    alg = build(AlgebraSpec(AlgebraFamily.SLN, 2))
    poly = NcPoly.zero()
    for word, coef in terms:
        poly = poly + NcPoly.word(word, coef)
    assert alg.parse(alg.presentation.format(poly)) == poly
