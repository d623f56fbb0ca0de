"""
Cleaving maps j_k: O_q(P) -> F(U_k) and the checks built on them.

j_k sends p[1,1]^±1 to d_k^±1, p[1,β] to a[k,β] and p[α,β] to d_k^-1 times the
2x2 quantum minor in columns {1, β} and rows {k, r}, where r runs over the rows
other than k in increasing order as α runs over 2..n.  Keeping that order is
what makes the images satisfy the Manin relations of the p[α,β].  The convolution inverse is j_k∘S.  Trivialization, the
one-sided canonical map identity and the crossed cocycle τ are computed from
these two maps and the coaction of the chart.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import P11_INV, Letter, NcPoly, TensorPoly, Word, _accumulate, d_inv, format_word
from app.services.algebra.rewrite import normal_words
from app.services.algebra.sampling import sample
from app.services.quantum.hopf import AlgebraMap, expand_leg, insert_unit
from app.services.quantum.localization import (
    LocalizedAlgebra,
    coinvariant_generators,
    local_coaction,
    localize,
    localize_named,
)
from app.services.quantum.qgroups import (
    AlgebraFamily,
    AlgebraSpec,
    QuantumAlgebra,
    build,
    minor_free,
    permutation_sum,
)
from app.utils.errors import PresentationError
from app.utils.logging.logger import get_logger

log = get_logger(__name__)

Product = Callable[[NcPoly, NcPoly], NcPoly]


def two_minor(pres, rows: Tuple[int, int], cols: Tuple[int, int]) -> NcPoly:
    """D^{kl}_{ij} = a[i,k] a[j,l] - q^-1 a[i,l] a[j,k], unreduced."""
    return minor_free(pres, list(rows), list(cols))


def minor_rows(k: int, alpha: int) -> Tuple[int, int]:
    """Rows of the minor behind j_k(p[α,β]): row k moved to the front, the others kept in order."""
    other = alpha - 1 if alpha <= k else alpha
    return (min(k, other), max(k, other))


def cleaving_images(loc: LocalizedAlgebra, k: int, corrupt: bool = False) -> Dict[Letter, NcPoly]:
    """Images of the O_q(P) generators; `corrupt` rescales row max(k, 2) by -q."""
    pres = loc.presentation
    n = loc.n
    inv = NcPoly.letter(d_inv(k))
    parabolic = build(AlgebraSpec(AlgebraFamily.P, n)).presentation
    broken = max(k, 2) if corrupt else None
    images: Dict[Letter, NcPoly] = {P11_INV: inv}
    for (i, j), letter in parabolic.matrix_entries.items():
        if i == 1:
            images[letter] = pres.entry(k, j)
            continue
        minor = two_minor(pres, minor_rows(k, i), (1, j))
        if i == broken:
            minor = minor.scale(-Scalar.q())
        images[letter] = pres.reduce(inv * minor)
    return images


@dataclass
class CleavingMap:
    n: int
    k: int
    chart: LocalizedAlgebra
    structure: QuantumAlgebra
    images: Dict[Letter, NcPoly]
    corrupted: bool = False
    _map: Optional[AlgebraMap] = field(default=None, repr=False)
    _inverse: Dict[Word, NcPoly] = field(default_factory=dict, repr=False)

    @property
    def map(self) -> AlgebraMap:
        if self._map is None:
            self._map = AlgebraMap(f"j_{self.k}", self.structure.presentation, self.chart.presentation, self.images.__getitem__)
        return self._map

    def __call__(self, poly: NcPoly) -> NcPoly:
        return self.map(poly)

    def word(self, word: Word) -> NcPoly:
        return self.map.apply_word(word)

    def inverse_word(self, word: Word) -> NcPoly:
        """j_k∘S on a word."""
        cached = self._inverse.get(word)
        if cached is None:
            cached = self.map(self.structure.require_hopf().antipode_word(word))
            self._inverse[word] = cached
        return cached

    def inverse(self, poly: NcPoly) -> NcPoly:
        total = NcPoly.zero()
        for word, coef in poly.terms.items():
            total = total + self.inverse_word(word).scale(coef)
        return total

    def table(self) -> Dict[str, str]:
        fmt = self.chart.presentation.format
        return {letter.text(): fmt(image) for letter, image in sorted(self.images.items(), key=lambda item: self.structure.presentation.rank(item[0]))}


def build_cleaving(n: int, k: int, corrupt: bool = False) -> CleavingMap:
    if not 1 <= k <= n:
        raise PresentationError(f"chart index k must lie in 1..{n}, got {k}")
    chart = localize_named(n, (k,))
    structure = build(AlgebraSpec(AlgebraFamily.P, n))
    return CleavingMap(n, k, chart, structure, cleaving_images(chart, k, corrupt), corrupted=corrupt)


@lru_cache(maxsize=None)
def cleaving(n: int, k: int) -> CleavingMap:
    return build_cleaving(n, k)


# -- verification ----------------------------------------------------------------


def _structure_words(cm: CleavingMap, degree: int) -> List[Word]:
    return sample(normal_words(cm.structure.presentation, degree))


def check_relations(cm: CleavingMap) -> Verdict:
    """(i) images of the O_q(P) relations, including p11·det_q(p_αβ) = 1, vanish in F(U_k)."""
    verdict = Verdict(f"j_{cm.k} respects the relations of O_q(P)")
    target = cm.chart.presentation
    source = cm.structure.presentation
    for rule in source.rules:
        diff = target.reduce(cm.word(rule.lhs) - cm(rule.rhs))
        verdict.record(target.vanishes(diff), lambda: f"{rule}: {target.format(diff)}")
    lower = list(range(2, cm.n + 1))
    det_relation = source.entry(1, 1) * minor_free(source, lower, lower) - NcPoly.one()
    diff = target.reduce(cm(det_relation))
    verdict.record(target.vanishes(diff), lambda: f"p11·det_q(p_αβ) - 1: {target.format(diff)}")
    return verdict


def check_comodule(cm: CleavingMap) -> Verdict:
    """(ii) δ_k∘j_k = (j_k⊗id)∘Δ_P on generators."""
    verdict = Verdict(f"j_{cm.k} is an O_q(P)-comodule map")
    delta = local_coaction(cm.chart)
    hopf = cm.structure.require_hopf()
    for letter in cm.structure.presentation.generators:
        left = delta(cm.word((letter,)))
        right = hopf.coproduct_word((letter,)).map_legs(delta.legs, [cm.word, None]).reduced()
        diff = left - right
        verdict.record(diff.vanishes(), lambda: f"{letter.text()}: {diff}")
    return verdict


def check_convolution_inverse(cm: CleavingMap, degree: int = 2) -> Verdict:
    """(iii) j∗(j∘S) = ε·1 = (j∘S)∗j on generators and short products."""
    verdict = Verdict(f"j_{cm.k}∘S is the convolution inverse of j_{cm.k}")
    hopf = cm.structure.require_hopf()
    target = cm.chart.presentation
    for word in _structure_words(cm, degree):
        unit = NcPoly.constant(hopf.counit_word(word))
        left = NcPoly.zero()
        right = NcPoly.zero()
        for (w1, w2), coef in hopf.coproduct_word(word).terms.items():
            left = left + (cm.word(w1) * cm.inverse_word(w2)).scale(coef)
            right = right + (cm.inverse_word(w1) * cm.word(w2)).scale(coef)
        left = target.reduce(left) - unit
        right = target.reduce(right) - unit
        verdict.record(target.vanishes(left) and target.vanishes(right), lambda: f"{format_word(word)}: {target.format(left)} | {target.format(right)}")
    return verdict


def verify_cleaving(n: int, k: int, corrupt: bool = False) -> Dict[str, Verdict]:
    cm = build_cleaving(n, k, corrupt) if corrupt else cleaving(n, k)
    return {
        "relations": check_relations(cm),
        "comodule": check_comodule(cm),
        "convolution": check_convolution_inverse(cm),
    }


def check_determinant_factorization(n: int) -> Verdict:
    """det_q(c) = det_q(a) in O_q(M_n)[d_1^-1], c = (a11, a1β; 0, j_1(p_αβ))."""
    loc = localize(build(AlgebraSpec(AlgebraFamily.MN, n)), (1,))
    pres = loc.presentation
    inv = NcPoly.letter(d_inv(1))
    entries: Dict[Tuple[int, int], NcPoly] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == 1:
                entries[(i, j)] = pres.entry(1, j)
            elif j == 1:
                entries[(i, j)] = NcPoly.zero()
            else:
                entries[(i, j)] = pres.reduce(inv * two_minor(pres, (1, i), (1, j)))
    full = list(range(1, n + 1))
    left = pres.reduce(permutation_sum(lambda i, j: entries[(i, j)], full, full))
    right = pres.reduce(minor_free(pres, full, full))
    verdict = Verdict(f"det_q of the factorized matrix equals det_q(a) for n={n}")
    diff = left - right
    verdict.record(pres.vanishes(diff), lambda: pres.format(diff))
    return verdict


# -- trivialization and canonical map ----------------------------------------------


def theta(cm: CleavingMap, b: NcPoly, word: Word) -> NcPoly:
    return cm.chart.presentation.reduce(b * cm.word(word))


def phi(cm: CleavingMap, poly: NcPoly) -> TensorPoly:
    """Φ(a) = a_(0) j^-1(a_(1)) ⊗ a_(2)."""
    delta = local_coaction(cm.chart)
    hopf = cm.structure.require_hopf()
    chart, structure = delta.legs
    triple = (chart, structure, structure)
    expanded = expand_leg(delta(poly), 1, hopf.coproduct_word, triple)
    out: Dict[tuple, Scalar] = {}
    for (w0, w1, w2), coef in expanded.terms.items():
        for w, c in chart.reduce(NcPoly.word(w0) * cm.inverse_word(w1)).terms.items():
            _accumulate(out, (w, w2), coef * c)
    return TensorPoly._raw(delta.legs, out)


def verify_trivialization(n: int, k: int, degree: int) -> Dict[str, Verdict]:
    cm = cleaving(n, k)
    chart = cm.chart.presentation
    delta = local_coaction(cm.chart)
    base_words = sample(coinvariant_generators(cm.chart, max(degree - 1, 0)), 12)
    structure_words = _structure_words(cm, degree)

    inverse_left = Verdict(f"Φ∘θ = id on B ⊗ O_q(P) for chart {k}")
    for b in base_words:
        for word in structure_words:
            image = phi(cm, theta(cm, b, word))
            expected = TensorPoly.from_polys(delta.legs, [b, NcPoly.word(word)])
            diff = image - expected
            inverse_left.record(diff.vanishes(), lambda: f"b={chart.format(b)}, h={format_word(word)}: {diff}")

    inverse_right = Verdict(f"θ∘Φ = id on F(U_{k})")
    coinvariant_leg = Verdict(f"first leg of Φ is coinvariant on F(U_{k})")
    structure = cm.structure.presentation
    for word in sample(normal_words(chart, degree)):
        image = phi(cm, NcPoly.word(word))
        back = NcPoly.zero()
        for (w0, w1), coef in image.terms.items():
            back = back + (NcPoly.word(w0) * cm.word(w1)).scale(coef)
        diff = chart.reduce(back) - NcPoly.word(word)
        inverse_right.record(chart.vanishes(diff), lambda: f"{format_word(word)}: {chart.format(diff)}")
        coacted = expand_leg(image, 0, delta.word, (chart, structure, structure))
        fixed = coacted - insert_unit(image, 1, structure)
        coinvariant_leg.record(fixed.vanishes(), lambda: f"{format_word(word)}: {fixed}")
    return {"phi_theta": inverse_left, "theta_phi": inverse_right, "coinvariant_leg": coinvariant_leg}


def canonical_map(cm: CleavingMap, tensor: TensorPoly) -> TensorPoly:
    """χ(a ⊗ a') = a a'_(0) ⊗ a'_(1)."""
    delta = local_coaction(cm.chart)
    chart = cm.chart.presentation
    out: Dict[tuple, Scalar] = {}
    for (w0, w1), coef in tensor.terms.items():
        for (v0, v1), c in delta.word(w1).terms.items():
            for w, c2 in chart.normal_form_word(w0 + v0).items():
                _accumulate(out, (w, v1), coef * c * c2)
    return TensorPoly._raw(delta.legs, out)


def canonical_section(cm: CleavingMap, a: NcPoly, word: Word) -> TensorPoly:
    """χ̃(a ⊗ h) = a j^-1(h_(1)) ⊗ j(h_(2)) in F(U_k) ⊗ F(U_k)."""
    chart = cm.chart.presentation
    hopf = cm.structure.require_hopf()
    legs = (chart, chart)
    total = TensorPoly(legs)
    for (w1, w2), coef in hopf.coproduct_word(word).terms.items():
        left = chart.reduce(a * cm.inverse_word(w1))
        total = total + TensorPoly.from_polys(legs, [left, cm.word(w2)]).scale(coef)
    return total


def canonical_map_section(n: int, k: int, degree: int) -> Verdict:
    """χ∘χ̃ = id on F(U_k) ⊗ O_q(P) words up to the degree bound."""
    cm = cleaving(n, k)
    chart = cm.chart.presentation
    delta = local_coaction(cm.chart)
    verdict = Verdict(f"χ∘χ̃ = id for chart {k}")
    chart_words = sample(normal_words(chart, max(degree - 1, 0)), 8)
    for word in _structure_words(cm, degree):
        for a_word in chart_words:
            a = NcPoly.word(a_word)
            image = canonical_map(cm, canonical_section(cm, a, word))
            expected = TensorPoly.from_polys(delta.legs, [a, NcPoly.word(word)])
            diff = image - expected
            verdict.record(diff.vanishes(), lambda: f"{format_word(a_word)} ⊗ {format_word(word)}: {diff}")
    return verdict


# -- crossed cocycle --------------------------------------------------------------


@dataclass
class CrossedCocycle:
    chart: int
    values: Dict[Tuple[Letter, Letter], NcPoly]
    counits: Dict[Tuple[Letter, Letter], Scalar]
    formatter: Callable[[NcPoly], str]
    vanishes: Callable[[NcPoly], bool]

    def is_trivial(self) -> bool:
        return not self.nontrivial_pairs()

    def nontrivial_pairs(self) -> List[Tuple[Letter, Letter]]:
        return [pair for pair, value in self.values.items() if not self.vanishes(value - NcPoly.constant(self.counits[pair]))]

    def as_dict(self) -> Dict[str, str]:
        return {f"{h.text()},{g.text()}": self.formatter(value) for (h, g), value in sorted(self.values.items())}


def crossed_cocycle(
    cm: CleavingMap,
    product: Optional[Product] = None,
    letters: Optional[List[Letter]] = None,
) -> CrossedCocycle:
    """τ(h, g) = j(h_(1)) j(g_(1)) j^-1(h_(2) g_(2)), products in F(U_k) given by `product`."""
    chart = cm.chart.presentation
    hopf = cm.structure.require_hopf()
    multiply = product or (lambda p, r: chart.reduce(p * r))
    generators = letters or [letter for letter in cm.structure.presentation.generators if cm.structure.presentation.is_normal((letter,))]
    values = {}
    counits = {}
    for h in generators:
        for g in generators:
            total = NcPoly.zero()
            for (h1, h2), ch in hopf.coproduct_word((h,)).terms.items():
                for (g1, g2), cg in hopf.coproduct_word((g,)).terms.items():
                    inner = cm.inverse(cm.structure.presentation.reduce(NcPoly.word(h2 + g2)))
                    total = total + multiply(multiply(cm.word(h1), cm.word(g1)), inner).scale(ch * cg)
            values[(h, g)] = total
            counits[(h, g)] = hopf.counit_word((h,)) * hopf.counit_word((g,))
    return CrossedCocycle(cm.k, values, counits, chart.format, chart.vanishes)


def is_trivial(tau: CrossedCocycle) -> bool:
    return tau.is_trivial()


def check_cocycle_coinvariant(cm: CleavingMap, tau: CrossedCocycle) -> Verdict:
    delta = local_coaction(cm.chart)
    verdict = Verdict(f"τ takes coinvariant values on chart {cm.k}")
    for (h, g), value in tau.values.items():
        diff = delta(value) - TensorPoly.from_polys(delta.legs, [value, NcPoly.one()])
        verdict.record(diff.vanishes(), lambda: f"τ({h.text()},{g.text()}): {diff}")
    return verdict


def smash_product_witness(cm: CleavingMap, length: int = 1) -> Optional[str]:
    """A generator h and coinvariant b with j(h) b != b j(h), if one exists."""
    chart = cm.chart.presentation
    for b in coinvariant_generators(cm.chart, length)[1:]:
        for letter in cm.structure.presentation.generators:
            image = cm.word((letter,))
            diff = chart.reduce(image * b - b * image)
            if not chart.vanishes(diff):
                return f"[j({letter.text()}), {chart.format(b)}] = {chart.format(diff)}"
    return None


def classical_coaction_values(n: int = 2) -> Dict[str, str]:
    """δ on the chart-1 generators, for display and the classical-limit comparison."""
    loc = localize_named(n, (1,))
    delta = local_coaction(loc)
    return {letter.text(): str(delta.word((letter,))) for letter in loc.presentation.generators}
