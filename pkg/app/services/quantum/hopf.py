"""
Bialgebra and Hopf structure maps on presented algebras.

Tables give Δ, ε and S on generators; Δ and ε extend multiplicatively and S
anti-multiplicatively, with tensor legs reduced after every letter.  The
`check_*` functions verify the axioms on given words and report a Verdict.
"""

from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import EMPTY, Letter, NcPoly, TensorPoly, Word, _accumulate, format_word, tensor_mul
from app.services.algebra.rewrite import Presentation
from app.utils.errors import HopfStructureError


class AlgebraMap:
    """Algebra map from a free algebra on `source` letters into a presented `target`."""

    def __init__(self, name: str, source: Optional[Presentation], target: Presentation, image: Callable[[Letter], NcPoly]):
        self.name = name
        self.source = source
        self.target = target
        self._image = image
        self._letters: Dict[Letter, NcPoly] = {}
        self._cache: Dict[Word, NcPoly] = {}

    def letter_image(self, letter: Letter) -> NcPoly:
        if letter not in self._letters:
            self._letters[letter] = self.target.reduce(self._image(letter))
        return self._letters[letter]

    def apply_word(self, word: Word) -> NcPoly:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if not word:
            result = NcPoly.one()
        else:
            result = self.target.reduce(self.apply_word(word[:-1]) * self.letter_image(word[-1]))
        self._cache[word] = result
        return result

    def __call__(self, poly: NcPoly) -> NcPoly:
        total: Dict[Word, Scalar] = {}
        for word, coef in poly.terms.items():
            for w, c in self.apply_word(word).terms.items():
                _accumulate(total, w, coef * c)
        return NcPoly._raw(total)


class HopfStructure:
    """Coproduct, counit and (optional) antipode tables for a presentation."""

    def __init__(
        self,
        algebra: Presentation,
        coproduct_table: Mapping[Letter, TensorPoly],
        counit_table: Mapping[Letter, Scalar],
        antipode_table: Optional[Mapping[Letter, NcPoly]] = None,
    ):
        self.algebra = algebra
        self.coproduct_table = dict(coproduct_table)
        self.counit_table = dict(counit_table)
        self.antipode_table = dict(antipode_table) if antipode_table is not None else None
        for letter in algebra.generators:
            if letter not in self.coproduct_table or letter not in self.counit_table:
                raise HopfStructureError(f"{algebra.name}: no coproduct/counit for {letter.text()}")
            if self.antipode_table is not None and letter not in self.antipode_table:
                raise HopfStructureError(f"{algebra.name}: no antipode for {letter.text()}")
        self.legs = (algebra, algebra)
        self._delta: Dict[Word, TensorPoly] = {EMPTY: TensorPoly.unit(self.legs)}
        self._antipode: Dict[Word, NcPoly] = {EMPTY: NcPoly.one()}

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def has_antipode(self) -> bool:
        return self.antipode_table is not None

    def coproduct_word(self, word: Word) -> TensorPoly:
        cached = self._delta.get(word)
        if cached is not None:
            return cached
        head = self.coproduct_word(word[:-1])
        result = tensor_mul(head, self.coproduct_table[word[-1]]).reduced()
        self._delta[word] = result
        return result

    def coproduct(self, poly: NcPoly) -> TensorPoly:
        total = TensorPoly(self.legs)
        for word, coef in poly.terms.items():
            total = total + self.coproduct_word(word).scale(coef)
        return total

    def counit_word(self, word: Word) -> Scalar:
        value = Scalar.one()
        for letter in word:
            value = value * self.counit_table[letter]
            if value.is_zero():
                break
        return value

    def counit(self, poly: NcPoly) -> Scalar:
        total = Scalar.zero()
        for word, coef in poly.terms.items():
            total = total + coef * self.counit_word(word)
        return total

    def antipode_word(self, word: Word) -> NcPoly:
        if self.antipode_table is None:
            raise HopfStructureError(f"{self.name} has no antipode")
        cached = self._antipode.get(word)
        if cached is not None:
            return cached
        # S(w x) = S(x) S(w)
        result = self.algebra.reduce(self.antipode_table[word[-1]] * self.antipode_word(word[:-1]))
        self._antipode[word] = result
        return result

    def antipode(self, poly: NcPoly) -> NcPoly:
        total = NcPoly.zero()
        for word, coef in poly.terms.items():
            total = total + self.antipode_word(word).scale(coef)
        return total


# -- tensor leg helpers ----------------------------------------------------


def expand_leg(t: TensorPoly, leg: int, fn: Callable[[Word], TensorPoly], algebras: Sequence) -> TensorPoly:
    """Replace leg `leg` by the tensor fn(word); the result lives over `algebras`."""
    out: Dict[tuple, Scalar] = {}
    for key, coef in t.terms.items():
        for inner, c in fn(key[leg]).terms.items():
            _accumulate(out, key[:leg] + inner + key[leg + 1:], coef * c)
    return TensorPoly._raw(tuple(algebras), out)


def map_leg(t: TensorPoly, leg: int, fn: Callable[[Word], NcPoly], algebra) -> TensorPoly:
    maps = [None] * t.rank
    maps[leg] = fn
    algebras = list(t.algebras)
    algebras[leg] = algebra
    return t.map_legs(algebras, maps).reduced()


def contract_leg(t: TensorPoly, leg: int, fn: Callable[[Word], Scalar]) -> TensorPoly:
    """Apply a scalar-valued map to one leg, dropping it."""
    out: Dict[tuple, Scalar] = {}
    for key, coef in t.terms.items():
        value = fn(key[leg])
        if not value.is_zero():
            _accumulate(out, key[:leg] + key[leg + 1:], coef * value)
    algebras = t.algebras[:leg] + t.algebras[leg + 1:]
    return TensorPoly._raw(algebras, out)


def multiply_legs(t: TensorPoly, algebra: Presentation, first: int = 0) -> TensorPoly:
    """m on legs (first, first+1), reduced in `algebra`."""
    out: Dict[tuple, Scalar] = {}
    for key, coef in t.terms.items():
        product = key[first] + key[first + 1]
        for w, c in algebra.normal_form_word(product).items():
            _accumulate(out, key[:first] + (w,) + key[first + 2:], coef * c)
    algebras = t.algebras[:first] + (algebra,) + t.algebras[first + 2:]
    return TensorPoly._raw(algebras, out)


def to_poly(t: TensorPoly) -> NcPoly:
    """Rank-1 tensor as a polynomial."""
    return NcPoly({key[0]: coef for key, coef in t.terms.items()})


def insert_unit(t: TensorPoly, position: int, algebra) -> TensorPoly:
    out = {key[:position] + (EMPTY,) + key[position:]: coef for key, coef in t.terms.items()}
    algebras = t.algebras[:position] + (algebra,) + t.algebras[position:]
    return TensorPoly._raw(algebras, out)


# -- axioms ----------------------------------------------------------------


def _tensor_witness(label: str, diff: TensorPoly) -> str:
    return f"{label}: {diff}"


def check_coassociativity(h: HopfStructure, words: Iterable[Word]) -> Verdict:
    verdict = Verdict("(Δ⊗id)∘Δ = (id⊗Δ)∘Δ")
    triple = (h.algebra,) * 3
    for word in words:
        delta = h.coproduct_word(word)
        left = expand_leg(delta, 0, h.coproduct_word, triple)
        right = expand_leg(delta, 1, h.coproduct_word, triple)
        diff = left - right
        verdict.record(diff.is_zero(), lambda: _tensor_witness(format_word(word), diff))
    return verdict


def check_counit(h: HopfStructure, words: Iterable[Word]) -> Verdict:
    verdict = Verdict("(ε⊗id)∘Δ = id = (id⊗ε)∘Δ")
    for word in words:
        delta = h.coproduct_word(word)
        target = h.algebra.reduce(NcPoly.word(word))
        left = to_poly(contract_leg(delta, 0, h.counit_word))
        right = to_poly(contract_leg(delta, 1, h.counit_word))
        ok = left == target and right == target
        verdict.record(ok, lambda: f"{format_word(word)}: {h.algebra.format(left - target)} | {h.algebra.format(right - target)}")
    return verdict


def check_antipode(h: HopfStructure, words: Iterable[Word]) -> Verdict:
    verdict = Verdict("m∘(S⊗id)∘Δ = η∘ε = m∘(id⊗S)∘Δ")
    if not h.has_antipode:
        return verdict.skip(f"{h.name} has no antipode")
    for word in words:
        delta = h.coproduct_word(word)
        unit = NcPoly.constant(h.counit_word(word))
        left = NcPoly.zero()
        right = NcPoly.zero()
        for (w1, w2), coef in delta.terms.items():
            left = left + (h.antipode_word(w1) * NcPoly.word(w2)).scale(coef)
            right = right + (NcPoly.word(w1) * h.antipode_word(w2)).scale(coef)
        left = h.algebra.reduce(left) - unit
        right = h.algebra.reduce(right) - unit
        ok = left.is_zero() and right.is_zero()
        verdict.record(ok, lambda: f"{format_word(word)}: {h.algebra.format(left)} | {h.algebra.format(right)}")
    return verdict


def check_relations_respected(h: HopfStructure) -> Verdict:
    """Δ, ε (and S) computed letterwise agree on both sides of every rule."""
    verdict = Verdict("structure maps respect the defining relations")
    for rule in h.algebra.rules:
        lhs = NcPoly.word(rule.lhs)
        delta_diff = _free_coproduct(h, lhs) - _free_coproduct(h, rule.rhs)
        counit_diff = h.counit(lhs) - h.counit(rule.rhs)
        ok = delta_diff.is_zero() and counit_diff.is_zero()
        witness = lambda: f"{rule}: Δ-defect {delta_diff}; ε-defect {counit_diff}"
        if ok and h.has_antipode:
            s_diff = h.algebra.reduce(_free_antipode(h, lhs) - _free_antipode(h, rule.rhs))
            ok = s_diff.is_zero()
            witness = lambda: f"{rule}: S-defect {h.algebra.format(s_diff)}"
        verdict.record(ok, witness)
    return verdict


def _free_coproduct(h: HopfStructure, poly: NcPoly) -> TensorPoly:
    """Δ extended letter by letter without first reducing the argument."""
    total = TensorPoly(h.legs)
    for word, coef in poly.terms.items():
        acc = TensorPoly.unit(h.legs)
        for letter in word:
            acc = tensor_mul(acc, h.coproduct_table[letter]).reduced()
        total = total + acc.scale(coef)
    return total


def _free_antipode(h: HopfStructure, poly: NcPoly) -> NcPoly:
    total = NcPoly.zero()
    for word, coef in poly.terms.items():
        acc = NcPoly.one()
        for letter in word:
            acc = h.algebra.reduce(h.antipode_table[letter] * acc)
        total = total + acc.scale(coef)
    return total


def check_hopf_map(f: AlgebraMap, source: HopfStructure, target: HopfStructure) -> Verdict:
    """Δ_T∘f = (f⊗f)∘Δ_S and ε_T∘f = ε_S on the generators of the source."""
    verdict = Verdict(f"{f.name} is a bialgebra map")
    for letter in source.algebra.generators:
        word = (letter,)
        image = f.apply_word(word)
        left = target.coproduct(image)
        right = source.coproduct_word(word).map_legs(target.legs, [f.apply_word, f.apply_word]).reduced()
        diff = left - right
        ok = diff.vanishes() and target.counit(image) == source.counit_word(word)
        verdict.record(ok, lambda: _tensor_witness(letter.text(), diff))
    return verdict
