from concurrent.futures import ThreadPoolExecutor
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.algebra import rewrite
from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import NcPoly, a, x
from app.services.algebra.rewrite import (
    Presentation,
    RewriteRule,
    check_confluence,
    complete,
    equal_mod,
    normal_words,
)
from app.services.quantum.localization import localize_named
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build
from app.utils.errors import CompletionError, PresentationError, ReductionBudgetExceeded


def plane(name="plane"):
    """x2 x1 = q x1 x2."""
    return Presentation(name, 2, [x(1), x(2)], [RewriteRule((x(2), x(1)), NcPoly.word((x(1), x(2)), Scalar.q()))])


def clashing():
    """x2 x1 = q x1 x2 together with x2 x2 = x1 x1 has an unresolvable overlap."""
    rules = [
        RewriteRule((x(2), x(1)), NcPoly.word((x(1), x(2)), Scalar.q())),
        RewriteRule((x(2), x(2)), NcPoly.word((x(1), x(1)))),
    ]
    return Presentation("clashing", 2, [x(1), x(2)], rules)


def test_normal_form_sorts_with_q_powers():
    pres = plane()
    nf = pres.normal_form(NcPoly.word((x(2), x(1), x(1))))
    assert nf == NcPoly.word((x(1), x(1), x(2)), Scalar.q(2))


def test_normal_form_is_linear():
    pres = plane()
    p = NcPoly.word((x(2), x(1)))
    r = NcPoly.word((x(2), x(2), x(1)), Scalar.q(-1))
    assert pres.normal_form(p + r) == pres.normal_form(p) + pres.normal_form(r)
    assert equal_mod(pres, p, NcPoly.word((x(1), x(2)), Scalar.q()))


def test_rejects_rules_against_the_order():
    with pytest.raises(PresentationError):
        Presentation("bad", 2, [x(1), x(2)], [RewriteRule((x(1), x(2)), NcPoly.word((x(2), x(1))))])


def test_rejects_duplicate_lhs():
    rule = RewriteRule((x(2), x(1)), NcPoly.word((x(1), x(2))))
    with pytest.raises(PresentationError):
        Presentation("dup", 2, [x(1), x(2)], [rule, rule])


def test_rejects_unknown_letters():
    with pytest.raises(PresentationError):
        Presentation("unknown", 2, [x(1), x(2)], [RewriteRule((x(2), x(1)), NcPoly.word((x(1), a(1, 1))))])
    with pytest.raises(PresentationError):
        plane().normal_form(NcPoly.letter(a(1, 1)))
    with pytest.raises(PresentationError):
        RewriteRule((), NcPoly.one())


def test_reduction_budget():
    pres = plane("budgeted")
    with pytest.raises(ReductionBudgetExceeded) as excinfo:
        pres.normal_form_word((x(2), x(2), x(1), x(1)), budget=3)
    assert excinfo.value.budget == 3
    assert plane("unbudgeted").normal_form_word((x(2), x(2), x(1), x(1))) == {(x(1), x(1), x(2), x(2)): Scalar.q(4)}


def test_confluence_of_matrix_algebra(mq2):
    report = check_confluence(mq2.presentation, 4)
    assert report.passed
    assert report.ambiguities > 0
    assert report.resolved == report.ambiguities
    verdict = report.as_verdict()
    assert verdict.status == "pass"
    assert verdict.details["unresolved"] == 0


def test_unresolved_ambiguity_is_reported():
    report = check_confluence(clashing(), 3)
    assert not report.passed
    assert report.witness is not None
    verdict = report.as_verdict()
    assert verdict.status == "fail"
    assert verdict.witness == report.witness


def test_completion_refuses_non_monomial_leading_coefficients():
    with pytest.raises(CompletionError):
        complete(clashing(), 3)


def test_completion_keeps_confluent_systems():
    pres = plane()
    assert complete(pres, 4).rules == pres.rules


def test_normal_words_of_quantum_plane_and_matrices(mq2):
    assert len(normal_words(plane(), 3)) == 1 + 2 + 3 + 4
    # ordered monomials in four letters
    assert len(normal_words(mq2.presentation, 2)) == 1 + 4 + 10


def test_budget_counts_fresh_work_only():
    pres = plane("warm")
    word = (x(2), x(2), x(1), x(1))
    expected = pres.normal_form_word(word)
    assert pres.normal_form_word(word, budget=1) == expected
    # the first step of `longer` lands on a cached word, so one application is enough
    pres.normal_form_word((x(2), x(2), x(1), x(2), x(1)))
    longer = (x(2), x(2), x(2), x(1), x(1))
    assert pres.normal_form_word(longer, budget=1) == {(x(1), x(1), x(2), x(2), x(2)): Scalar.q(6)}
    with pytest.raises(ReductionBudgetExceeded):
        plane("cold").normal_form_word(longer, budget=1)


def test_concurrent_reduction_survives_cache_clears(monkeypatch):
    monkeypatch.setattr(rewrite, "CACHE_LIMIT", 4)
    words = [word for size in range(1, 7) for word in product((x(1), x(2)), repeat=size)]
    sequential = plane("sequential")
    expected = {word: sequential.normal_form_word(word) for word in words}
    shared = plane("shared")
    with ThreadPoolExecutor(max_workers=8) as pool:
        found = list(pool.map(shared.normal_form_word, words * 4))
    assert found == [expected[word] for word in words * 4]


matrix_words = st.lists(st.sampled_from([a(1, 1), a(1, 2), a(2, 1), a(2, 2)]), max_size=6).map(tuple)


@settings(max_examples=60, deadline=None)
@given(matrix_words, matrix_words)
def test_reducing_factors_first_gives_the_same_normal_form(u, v):
    pres = build(AlgebraSpec(AlgebraFamily.MN, 2)).presentation
    whole = pres.normal_form(NcPoly.word(u + v))
    split = pres.normal_form(pres.normal_form(NcPoly.word(u)) * pres.normal_form(NcPoly.word(v)))
    assert whole == split


chart_letters = st.lists(st.sampled_from(localize_named(2, (2,)).presentation.generators), max_size=5).map(tuple)


@settings(max_examples=40, deadline=None)
@given(chart_letters, chart_letters)
def test_split_reduction_agrees_in_a_chart(u, v):
    pres = localize_named(2, (2,)).presentation
    whole = pres.reduce(NcPoly.word(u + v))
    split = pres.reduce(pres.reduce(NcPoly.word(u)) * pres.reduce(NcPoly.word(v)))
    assert pres.same(whole, split)
