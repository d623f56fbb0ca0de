"""
Ore localization of O_q(SL_n) and O_q(M_n) at the first-column entries d_i = a[i,1].

A LocalizedAlgebra is one rewrite system holding every inverse letter of the
inverted set: the base rules, push-left rules g·d_i^-1 -> d_i^-1·(...), the
q-commutation of inverse letters and the two cancellations.  Irreducible words
are an inverse prefix followed by a base normal word; a word hook cancels a
prefix inverse against a matching d_i further right.  Base relations can hide
a factor d_i inside a normal word, so reduced words are not unique: every exact
test clears denominators first (Presentation.vanishes, TensorPoly.vanishes).
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import LAMBDA, Scalar
from app.services.algebra.freealg import (
    A,
    EMPTY,
    INV_D,
    P11_INV,
    Letter,
    NcPoly,
    TensorPoly,
    Word,
    cleared_tensor_vectors,
    d_inv,
    format_word,
    tensor_mul,
)
from app.services.algebra.linalg import independent, rank
from app.services.algebra.rewrite import Presentation, RewriteRule, check_confluence, normal_words
from app.services.algebra.sampling import free_words, sample
from app.services.quantum.hopf import AlgebraMap, contract_leg, expand_leg, to_poly
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, QuantumAlgebra, build
from app.utils.errors import LocalizationError
from app.utils.logging.logger import engine_logger, get_logger

log = get_logger(__name__)


@dataclass
class LocalizedAlgebra:
    """O_q(G)[d_i^-1 : i in inverted] as a single presentation."""

    base: QuantumAlgebra
    inverted: Tuple[int, ...]
    order: Tuple[int, ...]
    presentation: Presentation
    push_rules: Tuple[RewriteRule, ...] = field(default_factory=tuple)

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def n(self) -> int:
        return self.base.n

    def parse(self, text: str) -> NcPoly:
        return self.presentation.parse(text)

    def normal_form(self, poly: NcPoly) -> NcPoly:
        return self.presentation.normal_form(poly)

    def format(self, poly: NcPoly) -> str:
        return self.presentation.format(poly)

    def d(self, i: int) -> NcPoly:
        return self.presentation.entry(i, 1)

    def inverse(self, i: int) -> NcPoly:
        if i not in self.inverted:
            raise LocalizationError(f"d[{i}] is not inverted in {self.name}")
        return NcPoly.letter(d_inv(i))

    def right_weight(self, word: Word) -> Tuple[int, ...]:
        return right_weight(word, self.n)

    def vanishes(self, poly: NcPoly) -> bool:
        return self.presentation.vanishes(poly)

    def same(self, p: NcPoly, r: NcPoly) -> bool:
        return self.presentation.same(p, r)


def _normalized(counts: List[int]) -> Tuple[int, ...]:
    low = min(counts)
    return tuple(c - low for c in counts)


def right_weight(word: Word, n: int) -> Tuple[int, ...]:
    """Column counts (inverse letters count -1 in column 1), normalized modulo the all-ones vector."""
    counts = [0] * n
    for letter in word:
        if letter.family == A:
            counts[letter.j - 1] += 1
        elif letter.family == INV_D:
            counts[0] -= 1
    return _normalized(counts)


def left_weight(word: Word, n: int) -> Tuple[int, ...]:
    """Row counts (d_i^-1 counts -1 in row i), normalized modulo the all-ones vector."""
    counts = [0] * n
    for letter in word:
        if letter.family == A:
            counts[letter.i - 1] += 1
        elif letter.family == INV_D:
            counts[letter.i - 1] -= 1
    return _normalized(counts)


def is_degree_zero(word: Word, n: int) -> bool:
    return not any(right_weight(word, n))


# -- rule derivation -----------------------------------------------------------


def push_left_rule(g: Letter, i: int) -> RewriteRule:
    """g·d_i^-1 rewritten with d_i^-1 on the left, from the Manin relation of g and d_i."""
    inv = d_inv(i)
    k, l = g.i, g.j
    if (k, l) == (i, 1):
        return RewriteRule((g, inv), NcPoly.one(), "cancel")
    if l == 1:
        coef = Scalar.q(-1) if k > i else Scalar.q()
        return RewriteRule((g, inv), NcPoly.word((inv, g), coef), "push")
    if k == i:
        return RewriteRule((g, inv), NcPoly.word((inv, g), Scalar.q(-1)), "push")
    if k < i:
        return RewriteRule((g, inv), NcPoly.word((inv, g)), "push")
    # g·d = d·g - λ a[i,l] a[k,1]
    rhs = NcPoly.word((inv, g)) + NcPoly.word((inv, inv, Letter(A, i, l), Letter(A, k, 1)), LAMBDA * Scalar.q(-2))
    return RewriteRule((g, inv), rhs, "push")


def inverse_commutation_rule(first: int, second: int) -> RewriteRule:
    """d_second^-1 · d_first^-1 -> c · d_first^-1 · d_second^-1 (first precedes second in the build order)."""
    coef = Scalar.q() if first < second else Scalar.q(-1)
    return RewriteRule((d_inv(second), d_inv(first)), NcPoly.word((d_inv(first), d_inv(second)), coef), "inverse")


def _cancellation_hook(inverted: Iterable[int]):
    indices = frozenset(inverted)

    def hook(word: Word) -> Optional[Tuple[Scalar, Word]]:
        split = 0
        while split < len(word) and word[split].family == INV_D:
            split += 1
        if not split:
            return None
        prefix, body = word[:split], word[split:]
        present = {letter.i for letter in prefix} & indices
        for pos, letter in enumerate(body):
            if letter.family == A and letter.j == 1 and letter.i in present:
                j = letter.i
                break
        else:
            return None
        coef = Scalar.one()
        for passed in body[:pos]:
            if passed.i >= j:
                return None
            if passed.j == 1:
                coef = coef * Scalar.q(-1)
        last = max(index for index, letter in enumerate(prefix) if letter.i == j)
        for passed in prefix[last + 1:]:
            if passed.i > j:
                coef = coef * Scalar.q(-1)
            elif passed.i < j:
                coef = coef * Scalar.q()
        return coef, prefix[:last] + prefix[last + 1:] + body[:pos] + body[pos + 1:]

    return hook


def _hook_rules(inverted: Iterable[int], generators: Sequence[Letter], hook):
    """The cancellation hook as rules d_j^-1·u·d_j -> c·u, u over letters of rows above j."""
    indices = tuple(sorted(set(inverted)))

    def rules(max_length: int) -> Iterator[RewriteRule]:
        for j in indices:
            passable = [g for g in generators if g.family == A and g.i < j]
            for size in range(1, max_length - 1):
                for middle in product(passable, repeat=size):
                    lhs = (d_inv(j),) + middle + (Letter(A, j, 1),)
                    coef, word = hook(lhs)
                    yield RewriteRule(lhs, NcPoly.word(word, coef), "hook")

    return rules


def _clearing(inverted: Iterable[int]):
    """Left multiplier d_1^s1·d_2^s2·... with s_i the most d_i^-1 letters in any one word."""
    indices = tuple(sorted(set(inverted)))

    def multiplier(words: Iterable[Word]) -> Word:
        needed = Counter()
        for word in words:
            counts = Counter(letter.i for letter in word if letter.family == INV_D)
            for i, count in counts.items():
                needed[i] = max(needed[i], count)
        return tuple(Letter(A, i, 1) for i in indices for _ in range(needed[i]))

    return multiplier


def _self_check(base: Presentation, rule: RewriteRule, i: int) -> Optional[str]:
    """Clear denominators of a derived rule and compare in the base algebra."""
    d = base.entry(i, 1)
    inv = d_inv(i)
    lhs_inverses = [letter for letter in rule.lhs if letter.is_inverse]
    if len(lhs_inverses) == 2:
        # d_x^-1 d_y^-1 = c d_y^-1 d_x^-1  <=>  d_y d_x = c^-1 d_x d_y
        (coef,) = rule.rhs.terms.values()
        x, y = rule.lhs[0].i, rule.lhs[1].i
        dx, dy = base.entry(x, 1), base.entry(y, 1)
        diff = base.reduce(dy * dx - (dx * dy).scale(coef.inverse()))
        return None if diff.is_zero() else base.format(diff)
    g = NcPoly.letter(rule.lhs[0])
    powers = []
    for word, coef in rule.rhs.terms.items():
        s = 0
        while s < len(word) and word[s] == inv:
            s += 1
        if any(letter.is_inverse for letter in word[s:]):
            return f"inverse letter left of a base letter in {format_word(word)}"
        powers.append((s, word[s:], coef))
    top = max((s for s, _, _ in powers), default=0)
    total = NcPoly.zero()
    for s, rest, coef in powers:
        total = total + (d ** (top - s) * NcPoly.word(rest) * d).scale(coef)
    diff = base.reduce(total - d ** top * g)
    return None if diff.is_zero() else base.format(diff)


def localize(base: QuantumAlgebra, inverted: Iterable[int], order: Optional[Sequence[int]] = None) -> LocalizedAlgebra:
    """Adjoin d_i^-1 for i in `inverted`; `order` fixes the build order of the inverse letters."""
    if base.spec.family not in (AlgebraFamily.MN, AlgebraFamily.SLN) or base.spec.twist or base.spec.r is not None:
        raise LocalizationError(f"localization needs O_q(M_n) or O_q(SL_n), got {base.name}")
    indices = tuple(sorted(set(inverted)))
    if not indices:
        raise LocalizationError("inverted set must be nonempty")
    n = base.n
    if any(not 1 <= i <= n for i in indices):
        raise LocalizationError(f"inverted indices must lie in 1..{n}")
    build_order = tuple(order) if order is not None else indices
    if tuple(sorted(build_order)) != indices:
        raise LocalizationError("build order must be a permutation of the inverted set")

    pres = base.presentation
    base_letters = [letter for letter in pres.generators if letter.family == A]
    push = []
    for i in build_order:
        for g in base_letters:
            rule = push_left_rule(g, i)
            problem = _self_check(pres, rule, i)
            if problem is not None:
                raise LocalizationError(f"no push-left rule for {g.text()}·d[{i}]^-1: residue {problem}")
            push.append(rule)
    for index, first in enumerate(build_order):
        for second in build_order[index + 1:]:
            rule = inverse_commutation_rule(first, second)
            problem = _self_check(pres, rule, first)
            if problem is not None:
                raise LocalizationError(f"inverse letters d[{first}]^-1, d[{second}]^-1 do not q-commute: {problem}")
            push.append(rule)
    cancel = [RewriteRule((d_inv(i), Letter(A, i, 1)), NcPoly.one(), "cancel") for i in build_order]

    suffix = "".join(map(str, build_order))
    hook = _cancellation_hook(indices)
    localized = Presentation(
        f"{pres.name}_loc{suffix}",
        n,
        [d_inv(i) for i in build_order] + list(pres.generators),
        list(pres.rules) + push + cancel,
        degree_cap=pres.degree_cap,
        matrix_entries=pres.matrix_entries,
        oriented=False,
        irreducible_hook=hook,
        hook_rules=_hook_rules(indices, pres.generators, hook),
        clearing=_clearing(indices),
        family=f"{pres.family}_loc",
    )
    engine_logger.log_build(localized.name, len(localized.generators), len(localized.rules))
    return LocalizedAlgebra(base, indices, build_order, localized, tuple(push + cancel))


@lru_cache(maxsize=None)
def localize_named(n: int, inverted: Tuple[int, ...], family: AlgebraFamily = AlgebraFamily.SLN) -> LocalizedAlgebra:
    return localize(build(AlgebraSpec(family, n)), inverted)


def _all_words(loc: LocalizedAlgebra, degree: int) -> List[Word]:
    return sample(free_words(loc.presentation.generators, degree))


def check_order_independence(base: QuantumAlgebra, inverted: Iterable[int], degree: int) -> Verdict:
    """Every build order of the inverse letters yields the same normal forms."""
    indices = tuple(sorted(set(inverted)))
    verdict = Verdict(f"localization at {indices} is independent of the build order")
    if len(indices) < 2:
        verdict.checked += 1
        return verdict
    canonical = localize(base, indices)
    words = _all_words(canonical, degree)
    for order in permutations(indices):
        if order == indices:
            continue
        other = localize(base, indices, order)
        for word in words:
            reference = canonical.presentation.reduce(NcPoly.word(word))
            transported = other.presentation.reduce(NcPoly.word(word))
            ok = canonical.same(transported, reference)
            verdict.record(ok, lambda: f"order {order}: {format_word(word)}")
    verdict.details["orders"] = len(list(permutations(indices)))
    verdict.details["words"] = len(words)
    return verdict


def check_push_rules(loc: LocalizedAlgebra) -> Verdict:
    """Re-run the denominator-clearing self-check on every derived rule."""
    verdict = Verdict(f"derived rules of {loc.name} hold in {loc.base.name}")
    for rule in loc.push_rules:
        inverses = [letter.i for letter in rule.lhs if letter.is_inverse]
        if rule.lhs[0].is_inverse and len(rule.lhs) == 2 and not rule.lhs[1].is_inverse:
            problem = None if (rule.lhs[0].i == rule.lhs[1].i and rule.lhs[1].j == 1) else "malformed cancellation"
        else:
            problem = _self_check(loc.base.presentation, rule, inverses[-1])
        verdict.record(problem is None, lambda: f"{rule}: {problem}")
    return verdict


def check_grading(loc: LocalizedAlgebra, degree: int) -> Verdict:
    """Normal forms of words stay in the right-weight class of the word."""
    verdict = Verdict(f"normal form preserves the right torus weight in {loc.name}")
    for word in _all_words(loc, degree):
        weight = right_weight(word, loc.n)
        nf = loc.presentation.normal_form_word(word)
        bad = [w for w in nf if right_weight(w, loc.n) != weight]
        verdict.record(not bad, lambda: f"{format_word(word)} -> {format_word(bad[0])}")
    return verdict


def check_rewriting_sound(loc: LocalizedAlgebra, degree: int) -> Verdict:
    """Every ambiguity of rules and hook, up to `degree`, agrees once denominators are cleared.

    Syntactic disagreements are expected (the reduced words are not unique) and
    only counted.
    """
    report = check_confluence(loc.presentation, degree)
    verdict = Verdict(f"rewriting in {loc.name} is sound up to length {degree}", checked=report.ambiguities)
    verdict.details.update(ambiguities=report.ambiguities, distinct_reductions=len(report.unresolved))
    if not report.sound:
        word, diff = report.residual[0]
        verdict.fail(f"{word}: {diff}")
    return verdict


# -- coaction ----------------------------------------------------------------


class LocalCoaction:
    """δ_I = (id ⊗ π)∘Δ on F(U_I), with d_i^-1 -> d_i^-1 ⊗ p[1,1]^-1."""

    def __init__(self, loc: LocalizedAlgebra):
        if loc.base.spec.family != AlgebraFamily.SLN:
            raise LocalizationError(f"the O_q(P) coaction is defined on localizations of O_q(SL_n), not {loc.base.name}")
        self.loc = loc
        self.comodule = build(AlgebraSpec(AlgebraFamily.P, loc.n))
        target = self.comodule.presentation
        self.legs = (loc.presentation, target)
        self._letters: Dict[Letter, TensorPoly] = {}
        for (i, j), letter in loc.presentation.matrix_entries.items():
            total = TensorPoly(self.legs)
            for k in range(1, loc.n + 1):
                right = target.entry(k, j)
                if not right.is_zero():
                    total = total + TensorPoly.from_polys(self.legs, [loc.presentation.entry(i, k), right])
            self._letters[letter] = total
        for i in loc.inverted:
            self._letters[d_inv(i)] = TensorPoly(self.legs, {((d_inv(i),), (P11_INV,)): 1})
        self._cache: Dict[Word, TensorPoly] = {EMPTY: TensorPoly.unit(self.legs)}

    def word(self, word: Word) -> TensorPoly:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        result = tensor_mul(self.word(word[:-1]), self._letters[word[-1]]).reduced()
        self._cache[word] = result
        return result

    def __call__(self, poly: NcPoly) -> TensorPoly:
        total = TensorPoly(self.legs)
        for word, coef in poly.terms.items():
            total = total + self.word(word).scale(coef)
        return total


_coactions: Dict[str, LocalCoaction] = {}


def local_coaction(loc: LocalizedAlgebra) -> LocalCoaction:
    if loc.name not in _coactions:
        _coactions[loc.name] = LocalCoaction(loc)
    return _coactions[loc.name]


def coaction_local(loc: LocalizedAlgebra, poly: NcPoly) -> TensorPoly:
    return local_coaction(loc)(poly)


def check_coaction(loc: LocalizedAlgebra) -> Verdict:
    """(δ⊗id)δ = (id⊗Δ_P)δ and (id⊗ε)δ = id on every generator."""
    delta = local_coaction(loc)
    hopf = delta.comodule.require_hopf()
    triple = (loc.presentation, hopf.algebra, hopf.algebra)
    verdict = Verdict(f"δ is a right O_q(P)-coaction on {loc.name}")
    for letter in loc.presentation.generators:
        image = delta.word((letter,))
        left = expand_leg(image, 0, delta.word, triple)
        right = expand_leg(image, 1, hopf.coproduct_word, triple)
        diff = left - right
        counit = to_poly(contract_leg(image, 1, hopf.counit_word))
        ok = diff.vanishes() and loc.same(counit, NcPoly.letter(letter))
        verdict.record(ok, lambda: f"{letter.text()}: {diff}")
    return verdict


def check_coaction_grading(loc: LocalizedAlgebra, degree: int) -> Verdict:
    """δ maps a word of left weight w into (weight w) ⊗ O_q(P).

    O_q(P) acts on the column index, so the row counts of the first leg are what
    δ keeps; the right weight is not preserved (δ(a[1,2]) contains a[1,1] ⊗ p[1,2]).
    """
    delta = local_coaction(loc)
    verdict = Verdict(f"δ preserves the left torus weight on {loc.name}")
    for word in sample(normal_words(loc.presentation, degree)):
        weight = left_weight(word, loc.n)
        bad = [key for key in delta.word(word).terms if left_weight(key[0], loc.n) != weight]
        verdict.record(not bad, lambda: f"{format_word(word)}: {format_word(bad[0][0])}")
    return verdict


# -- coinvariants --------------------------------------------------------------


def coinvariant_window(loc: LocalizedAlgebra, length: int) -> List[Word]:
    """Degree-zero normal words d_i^-s·B with B a base normal word of at most `length` letters."""
    (i,) = loc.inverted
    d = Letter(A, i, 1)
    window = []
    for body in normal_words(loc.base.presentation, length):
        counts = [0] * loc.n
        for letter in body:
            counts[letter.j - 1] += 1
        upper = set(counts[1:])
        if len(upper) > 1:
            continue
        level = upper.pop() if upper else 0
        s = counts[0] - level
        if s < 0 or (s > 0 and d in body):
            continue
        window.append((d_inv(i),) * s + body)
    return window


def coinvariant_generators(loc: LocalizedAlgebra, length: int) -> List[NcPoly]:
    """Ordered monomials of total degree <= length in u_j = d_j·d_i^-1 (j != i)."""
    (i,) = loc.inverted
    pres = loc.presentation
    inv = NcPoly.letter(d_inv(i))
    units = [pres.reduce(pres.entry(j, 1) * inv) for j in range(1, loc.n + 1) if j != i]
    monomials = [NcPoly.one()]
    frontier = [(NcPoly.one(), 0)]
    for _ in range(length):
        nxt = []
        for poly, start in frontier:
            for index in range(start, len(units)):
                product = pres.reduce(poly * units[index])
                monomials.append(product)
                nxt.append((product, index))
        frontier = nxt
    return monomials


def coinvariants(loc: LocalizedAlgebra, length: int) -> Verdict:
    """Exact kernel of δ - (·)⊗1 on the window against the span of monomials in d_j·d_i^-1.

    Window words may be linearly dependent as elements, so the kernel is
    dim span(window) - dim span(images), both ranks taken after clearing
    denominators.
    """
    if len(loc.inverted) != 1:
        raise LocalizationError("coinvariants are computed on a single chart")
    delta = local_coaction(loc)
    verdict = Verdict(f"coinvariants of {loc.name} are generated by d_j d_i^-1 (length <= {length})")
    window = [NcPoly.word(word) for word in coinvariant_window(loc, length)]
    monomials = coinvariant_generators(loc, length)
    vectors = loc.presentation.cleared_vectors(window + monomials)
    window_vectors, monomial_vectors = vectors[:len(window)], vectors[len(window):]
    span = rank(window_vectors)
    images = [delta(poly) - TensorPoly.from_polys(delta.legs, [poly, NcPoly.one()]) for poly in window]
    kernel = span - rank(cleared_tensor_vectors(images))
    expected = comb(length + loc.n - 1, loc.n - 1)
    verdict.details.update(window=len(window), span=span, kernel_dimension=kernel, expected_dimension=expected)
    verdict.record(len(monomials) == expected, lambda: f"{len(monomials)} monomials, expected {expected}")
    verdict.record(kernel == expected, lambda: f"kernel dimension {kernel} != {expected}")
    for poly, vector in zip(monomials, monomial_vectors):
        fixed = delta(poly) - TensorPoly.from_polys(delta.legs, [poly, NcPoly.one()])
        verdict.record(fixed.vanishes(), lambda: f"{loc.format(poly)} is not coinvariant: {fixed}")
        verdict.record(rank(window_vectors + [vector]) == span, lambda: f"{loc.format(poly)} lies outside the window")
    verdict.record(independent(monomial_vectors), lambda: "monomials in d_j d_i^-1 are dependent")
    log.debug(f"coinvariants {loc.name} L={length}: window {len(window)}, span {span}, kernel {kernel}, expected {expected}")
    return verdict


# -- restrictions ----------------------------------------------------------------


def restriction(source: Presentation, target: LocalizedAlgebra) -> AlgebraMap:
    """Inclusion r_IJ; `source` is the base algebra or a localization at a subset."""
    missing = [letter.text() for letter in source.generators if target.presentation.admits(letter) is not None]
    if missing:
        raise LocalizationError(f"{source.name} does not embed in {target.name}: {', '.join(missing)}")
    return AlgebraMap(f"r[{source.name}->{target.name}]", source, target.presentation, NcPoly.letter)
