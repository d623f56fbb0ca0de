import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import NcPoly, a, x
from app.services.algebra.rewrite import Presentation, normal_words
from app.services.quantum.hopf import (
    HopfStructure,
    check_antipode,
    check_coassociativity,
    check_counit,
    check_hopf_map,
    check_relations_respected,
)
from app.services.quantum.qgroups import build_named, torus_projection_p, torus_projection_sl
from app.utils.errors import HopfStructureError


@pytest.mark.parametrize("family", ["slq", "glq", "pq", "torus"])
def test_hopf_axioms_on_low_degree_words(family):
    alg = build_named(family, 2)
    words = normal_words(alg.presentation, 2)
    hopf = alg.require_hopf()
    assert check_coassociativity(hopf, words).passed
    assert check_counit(hopf, words).passed
    assert check_antipode(hopf, words).passed


def test_structure_maps_respect_relations(sl2, mq2):
    assert check_relations_respected(sl2.hopf).passed
    assert check_relations_respected(mq2.hopf).passed


def test_bialgebra_antipode_check_is_skipped(mq2):
    verdict = check_antipode(mq2.hopf, [(a(1, 1),)])
    assert verdict.status == "skip"
    with pytest.raises(HopfStructureError):
        mq2.hopf.antipode(NcPoly.letter(a(1, 1)))


def test_antipode_on_generators(sl2):
    assert sl2.hopf.antipode(NcPoly.letter(a(1, 1))) == NcPoly.letter(a(2, 2))
    assert sl2.hopf.antipode(NcPoly.letter(a(1, 2))) == NcPoly.word((a(1, 2),), Scalar.monomial(-1, 1))


def test_counit_and_coproduct_of_entries(sl2):
    assert sl2.hopf.counit(NcPoly.letter(a(1, 1))) == Scalar.one()
    assert sl2.hopf.counit(NcPoly.letter(a(2, 1))).is_zero()
    assert len(sl2.hopf.coproduct(NcPoly.letter(a(1, 2))).terms) == 2


def test_missing_tables_are_rejected():
    pres = Presentation("line", 1, [x(1)], [])
    with pytest.raises(HopfStructureError):
        HopfStructure(pres, {}, {})


@pytest.mark.parametrize("n", [2, 3])
def test_torus_projections_are_hopf_maps(n):
    sl, pq, torus = build_named("slq", n), build_named("pq", n), build_named("torus", n)
    assert check_hopf_map(torus_projection_sl(n), sl.hopf, torus.hopf).passed
    assert check_hopf_map(torus_projection_p(n), pq.hopf, torus.hopf).passed
