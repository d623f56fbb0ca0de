"""
Oriented rewrite systems for presented algebras.

A Presentation is an ordered generator list plus rules `lhs -> rhs` whose
right-hand words are all smaller than `lhs` in the term order (weighted degree
first, then leftmost generator rank).  Normal forms are computed leftmost-first
with a per-word cache; `check_confluence` resolves every overlap and inclusion
ambiguity up to a length bound, and `complete` adds the rules needed to resolve
them (bounded completion, never removing rules).

Localized presentations also carry a clearing rule: a left multiplier made of
d_i letters that turns any element into an inverse-free one.  Their reduced
words are not unique, so zero and equality tests go through `vanishes`, which
clears denominators and compares in the base algebra.
"""

import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import EMPTY, Letter, NcPoly, Word, _accumulate, format_word
from app.services.algebra.grammar import format_poly, index_problem
from app.utils.errors import CompletionError, PresentationError, ReductionBudgetExceeded
from app.utils.logging.logger import get_logger
from config import settings

log = get_logger(__name__)

OrderKey = Callable[[Word], tuple]
# Irreducible-word hook: returns a monomial replacement (coef, word) or None.
WordHook = Callable[[Word], Optional[Tuple[Scalar, Word]]]
# Left multiplier cancelling every inverse letter of the given reduced words.
Clearing = Callable[[Iterable[Word]], Word]
# The hook spelled out as rules, for every lhs up to a length.
HookRules = Callable[[int], Iterable["RewriteRule"]]

CACHE_LIMIT = 250_000


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NcPoly
    origin: str = "relation"

    def __post_init__(self):
        if not self.lhs:
            raise PresentationError("rule lhs must be a nonempty word")

    def as_poly(self) -> NcPoly:
        """lhs - rhs, the relation this rule orients."""
        return NcPoly.word(self.lhs) - self.rhs

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} -> {format_poly(self.rhs)}"


class Presentation:
    """Generators with a total order plus oriented rewrite rules."""

    def __init__(
        self,
        name: str,
        n: int,
        generators: Sequence[Letter],
        rules: Iterable[RewriteRule],
        *,
        degree_cap: int = 6,
        letter_weights: Optional[Mapping[Letter, int]] = None,
        excluded: Optional[Mapping[Letter, str]] = None,
        matrix_entries: Optional[Mapping[Tuple[int, int], Letter]] = None,
        order_key: Optional[OrderKey] = None,
        oriented: bool = True,
        irreducible_hook: Optional[WordHook] = None,
        hook_rules: Optional[HookRules] = None,
        clearing: Optional[Clearing] = None,
        family: str = "",
    ):
        self.name = name
        self.n = n
        self.family = family
        self.generators: Tuple[Letter, ...] = tuple(generators)
        self.rules: Tuple[RewriteRule, ...] = tuple(rules)
        self.degree_cap = degree_cap
        self.letter_weights = dict(letter_weights or {})
        self.excluded = dict(excluded or {})
        self.matrix_entries = dict(matrix_entries or {})
        self.oriented = oriented
        self.irreducible_hook = irreducible_hook
        self.hook_rules = hook_rules
        self.clearing = clearing
        self._custom_order = order_key
        self._lock = threading.RLock()
        self._rank = {letter: index for index, letter in enumerate(self.generators)}
        if len(self._rank) != len(self.generators):
            raise PresentationError(f"{name}: duplicate generators")
        self._validate()
        self._index: Dict[Letter, List[RewriteRule]] = {}
        for rule in sorted(self.rules, key=lambda r: (len(r.lhs), self.order_key(r.lhs))):
            self._index.setdefault(rule.lhs[0], []).append(rule)
        self._cache: Dict[Word, Dict[Word, Scalar]] = {}

    # -- order ----------------------------------------------------------
    def rank(self, letter: Letter) -> int:
        return self._rank[letter]

    def order_key(self, word: Word) -> tuple:
        if self._custom_order is not None:
            return self._custom_order(word)
        weight = sum(self.letter_weights.get(letter, 1) for letter in word)
        return (weight, tuple(self._rank[letter] for letter in word))

    def leading_word(self, poly: NcPoly) -> Word:
        return max(poly.words(), key=self.order_key)

    # -- validation -----------------------------------------------------
    def _validate(self) -> None:
        seen = set()
        for rule in self.rules:
            if rule.lhs in seen:
                raise PresentationError(f"{self.name}: duplicate rule lhs {format_word(rule.lhs)}")
            seen.add(rule.lhs)
            for letter in rule.lhs + tuple(l for w in rule.rhs.words() for l in w):
                if letter not in self._rank:
                    raise PresentationError(f"{self.name}: rule uses unknown letter {letter.text()}")
            if self.oriented:
                top = self.order_key(rule.lhs)
                for word in rule.rhs.words():
                    if self.order_key(word) >= top:
                        raise PresentationError(
                            f"{self.name}: rule {rule} is not compatible with the term order"
                        )

    def admits(self, letter: Letter) -> Optional[str]:
        """Grammar hook: None if the letter belongs to this algebra."""
        problem = index_problem(letter, self.n)
        if problem:
            return problem
        if letter in self.excluded:
            return self.excluded[letter]
        if letter not in self._rank:
            return f"letter {letter.text()} not in {self.name}"
        return None

    def check_letters(self, poly: NcPoly) -> None:
        for letter in poly.letters():
            if letter not in self._rank:
                raise PresentationError(f"letter {letter.text()} not in presentation {self.name}")

    # -- reduction ------------------------------------------------------
    def find_redex(self, word: Word) -> Optional[Tuple[int, RewriteRule]]:
        """Leftmost position where some rule lhs occurs."""
        for pos, letter in enumerate(word):
            for rule in self._index.get(letter, ()):
                end = pos + len(rule.lhs)
                if end <= len(word) and word[pos:end] == rule.lhs:
                    return pos, rule
        return None

    def _step(self, word: Word) -> Optional[Dict[Word, Scalar]]:
        redex = self.find_redex(word)
        if redex is not None:
            pos, rule = redex
            prefix, suffix = word[:pos], word[pos + len(rule.lhs):]
            out: Dict[Word, Scalar] = {}
            for middle, coef in rule.rhs.terms.items():
                _accumulate(out, prefix + middle + suffix, coef)
            return out
        if self.irreducible_hook is not None:
            replacement = self.irreducible_hook(word)
            if replacement is not None:
                coef, new_word = replacement
                return {new_word: coef}
        return None

    def is_normal(self, word: Word) -> bool:
        return self._step(word) is None

    def normal_form_word(self, word: Word, budget: Optional[int] = None) -> Mapping[Word, Scalar]:
        """Normal form of one word.

        `budget` bounds the rule applications spent on this word; words already
        in the cache cost nothing, so a budget limits fresh work only.
        """
        word = tuple(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        # shared cache; worker threads reduce concurrently
        with self._lock:
            cached = self._cache.get(word)
            if cached is not None:
                return cached
            if len(self._cache) > CACHE_LIMIT:
                self._cache.clear()
            return self._reduce_word(word, budget or settings.engine.reduction_budget)

    def _reduce_word(self, word: Word, limit: int) -> Mapping[Word, Scalar]:
        applications = 0
        pending_steps: Dict[Word, Dict[Word, Scalar]] = {}
        stack = [word]
        while stack:
            current = stack[-1]
            if current in self._cache:
                stack.pop()
                continue
            step = pending_steps.get(current)
            if step is None:
                step = self._step(current)
                if step is None:
                    self._cache[current] = {current: Scalar.one()}
                    stack.pop()
                    continue
                applications += 1
                if applications > limit:
                    log.error(f"reduction budget {limit} exhausted in {self.name}")
                    raise ReductionBudgetExceeded(limit, self.name)
                pending_steps[current] = step
            missing = [w for w in step if w not in self._cache]
            if missing:
                stack.extend(missing)
                continue
            result: Dict[Word, Scalar] = {}
            for w, coef in step.items():
                for nf_word, c in self._cache[w].items():
                    _accumulate(result, nf_word, coef * c)
            self._cache[current] = result
            pending_steps.pop(current, None)
            stack.pop()
        return self._cache[word]

    def normal_form(self, poly: NcPoly) -> NcPoly:
        self.check_letters(poly)
        out: Dict[Word, Scalar] = {}
        for word, coef in poly.terms.items():
            for nf_word, c in self.normal_form_word(word).items():
                _accumulate(out, nf_word, coef * c)
        return NcPoly._raw(out)

    def reduce(self, poly: NcPoly) -> NcPoly:
        """normal_form without the letter check (internal hot path)."""
        out: Dict[Word, Scalar] = {}
        for word, coef in poly.terms.items():
            for nf_word, c in self.normal_form_word(word).items():
                _accumulate(out, nf_word, coef * c)
        return NcPoly._raw(out)

    # -- exact comparison -----------------------------------------------
    def clearing_word(self, words: Iterable[Word]) -> Word:
        """Left multiplier cancelling the inverse letters of reduced `words`; empty when there are none."""
        if self.clearing is None:
            return EMPTY
        return tuple(self.clearing(words))

    def clear(self, poly: NcPoly, multiplier: Optional[Word] = None) -> NcPoly:
        """D·poly reduced, with D the clearing word of poly unless given."""
        reduced = self.reduce(poly)
        if multiplier is None:
            multiplier = self.clearing_word(reduced.words())
        if not multiplier:
            return reduced
        return self.reduce(NcPoly.word(multiplier) * reduced)

    def vanishes(self, poly: NcPoly) -> bool:
        return self.clear(poly).is_zero()

    def same(self, p: NcPoly, r: NcPoly) -> bool:
        return self.vanishes(p - r)

    def cleared_vectors(self, polys: Sequence[NcPoly]) -> List[Dict[Word, Scalar]]:
        """Coordinates for exact rank computations, all cleared by one common multiplier."""
        reduced = [self.reduce(poly) for poly in polys]
        multiplier = self.clearing_word(word for poly in reduced for word in poly.words())
        return [dict(self.clear(poly, multiplier).terms) for poly in reduced]

    def parse(self, text: str) -> NcPoly:
        from app.services.algebra.grammar import parse

        return parse(text, self)

    def format(self, poly: NcPoly) -> str:
        return format_poly(poly, self.order_key)

    # -- derived presentations -----------------------------------------
    def extended(self, rules: Iterable[RewriteRule], name: Optional[str] = None) -> "Presentation":
        return Presentation(
            name or self.name,
            self.n,
            self.generators,
            self.rules + tuple(rules),
            degree_cap=self.degree_cap,
            letter_weights=self.letter_weights,
            excluded=self.excluded,
            matrix_entries=self.matrix_entries,
            order_key=self._custom_order,
            oriented=self.oriented,
            irreducible_hook=self.irreducible_hook,
            hook_rules=self.hook_rules,
            clearing=self.clearing,
            family=self.family,
        )

    def with_rules(self, rules: Iterable[RewriteRule], name: Optional[str] = None) -> "Presentation":
        return Presentation(
            name or self.name,
            self.n,
            self.generators,
            tuple(rules),
            degree_cap=self.degree_cap,
            letter_weights=self.letter_weights,
            excluded=self.excluded,
            matrix_entries=self.matrix_entries,
            order_key=self._custom_order,
            oriented=self.oriented,
            irreducible_hook=self.irreducible_hook,
            hook_rules=self.hook_rules,
            clearing=self.clearing,
            family=self.family,
        )

    def rule_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for rule in self.rules:
            counts[rule.origin] = counts.get(rule.origin, 0) + 1
        return counts

    def entry(self, i: int, j: int) -> NcPoly:
        """Matrix entry (i, j) as a polynomial; zero for entries killed by the presentation."""
        letter = self.matrix_entries.get((i, j))
        return NcPoly.letter(letter) if letter is not None else NcPoly.zero()

    def __repr__(self) -> str:
        return f"Presentation({self.name!r}, generators={len(self.generators)}, rules={len(self.rules)})"


def normal_form(p: NcPoly, pres: Presentation) -> NcPoly:
    return pres.normal_form(p)


def equal_mod(pres: Presentation, p: NcPoly, r: NcPoly) -> bool:
    pres.check_letters(p - r)
    return pres.same(p, r)


# -- ambiguities ---------------------------------------------------------


@dataclass(frozen=True)
class Ambiguity:
    word: Word
    first: RewriteRule
    first_at: int
    second: RewriteRule
    second_at: int
    kind: str  # "overlap" or "inclusion"


def _ambiguities(firsts: Sequence[RewriteRule], seconds: Sequence[RewriteRule], max_length: int) -> Iterator[Ambiguity]:
    index: Dict[Letter, List[RewriteRule]] = {}
    for rule in seconds:
        index.setdefault(rule.lhs[0], []).append(rule)
    for first in firsts:
        u = first.lhs
        # inclusions: second.lhs occurs inside u
        if len(u) <= max_length:
            for pos, letter in enumerate(u):
                for second in index.get(letter, ()):
                    v = second.lhs
                    if second is first and pos == 0:
                        continue
                    if pos + len(v) <= len(u) and u[pos:pos + len(v)] == v:
                        yield Ambiguity(u, first, 0, second, pos, "inclusion")
        # proper overlaps: a suffix of u is a proper prefix of v
        for k in range(1, len(u)):
            for second in index.get(u[len(u) - k], ()):
                v = second.lhs
                if len(v) <= k or u[len(u) - k:] != v[:k]:
                    continue
                word = u + v[k:]
                if len(word) <= max_length:
                    yield Ambiguity(word, first, 0, second, len(u) - k, "overlap")


def ambiguities(pres: Presentation, max_length: int) -> Iterator[Ambiguity]:
    """All overlap and inclusion ambiguities of total length <= max_length.

    A presentation with a word hook also contributes the ambiguities between
    its rules and the hook written out as rules.
    """
    yield from _ambiguities(pres.rules, pres.rules, max_length)
    if pres.hook_rules is None:
        return
    spelled = [rule for rule in pres.hook_rules(max_length) if len(rule.lhs) <= max_length]
    yield from _ambiguities(spelled, pres.rules, max_length)
    yield from _ambiguities(pres.rules, spelled, max_length)


def _apply(word: Word, rule: RewriteRule, at: int) -> NcPoly:
    prefix, suffix = word[:at], word[at + len(rule.lhs):]
    out: Dict[Word, Scalar] = {}
    for middle, coef in rule.rhs.terms.items():
        _accumulate(out, prefix + middle + suffix, coef)
    return NcPoly._raw(out)


def resolve(pres: Presentation, amb: Ambiguity) -> NcPoly:
    """Difference of the two one-step reductions, both brought to normal form."""
    left = pres.reduce(_apply(amb.word, amb.first, amb.first_at))
    right = pres.reduce(_apply(amb.word, amb.second, amb.second_at))
    return left - right


@dataclass
class ConfluenceReport:
    presentation: str
    degree: int
    ambiguities: int = 0
    resolved: int = 0
    unresolved: List[Tuple[str, str]] = field(default_factory=list)
    # unresolved pairs whose two reductions still differ once denominators are cleared
    residual: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.unresolved

    @property
    def sound(self) -> bool:
        return not self.residual

    @property
    def witness(self) -> Optional[str]:
        if not self.unresolved:
            return None
        word, diff = self.unresolved[0]
        return f"{word}: {diff}"

    def as_dict(self) -> Dict[str, object]:
        return {
            "presentation": self.presentation,
            "degree": self.degree,
            "ambiguities": self.ambiguities,
            "resolved": self.resolved,
            "unresolved": len(self.unresolved),
            "residual": len(self.residual),
            "status": "pass" if self.passed else "fail",
        }

    def as_verdict(self) -> Verdict:
        verdict = Verdict(f"{self.presentation} is locally confluent up to length {self.degree}", checked=self.ambiguities)
        verdict.details.update(self.as_dict())
        if not self.passed:
            verdict.fail(self.witness)
        return verdict


def check_confluence(pres: Presentation, degree: int) -> ConfluenceReport:
    """Report-only local confluence certification up to the given word length."""
    report = ConfluenceReport(pres.name, degree)
    for amb in ambiguities(pres, degree):
        report.ambiguities += 1
        diff = resolve(pres, amb)
        if diff.is_zero():
            report.resolved += 1
        else:
            witness = (format_word(amb.word), pres.format(diff))
            report.unresolved.append(witness)
            if not pres.vanishes(diff):
                report.residual.append(witness)
    log.debug(
        f"confluence {pres.name} D={degree}: {report.ambiguities} ambiguities, "
        f"{len(report.unresolved)} unresolved, {len(report.residual)} residual"
    )
    return report


def orient(pres: Presentation, relation: NcPoly, origin: str) -> RewriteRule:
    """Turn a nonzero relation into a rule with its leading word as lhs."""
    lead = pres.leading_word(relation)
    coef = relation.coefficient(lead)
    if lead == EMPTY:
        raise CompletionError(f"{pres.name}: relations collapse to the scalar {coef}")
    if not coef.is_monomial():
        raise CompletionError(
            f"{pres.name}: leading coefficient {coef} of {format_word(lead)} is not invertible"
        )
    rhs = (relation - NcPoly.word(lead, coef)).scale(-coef.inverse())
    return RewriteRule(lead, rhs, origin)


def complete(pres: Presentation, cap: int, max_rounds: Optional[int] = None) -> Presentation:
    """Add rules until every ambiguity of length <= cap resolves."""
    rounds = max_rounds or settings.engine.max_completion_rounds
    work = pres
    for _ in range(rounds):
        added = 0
        for amb in list(ambiguities(work, cap)):
            diff = resolve(work, amb)
            if diff.is_zero():
                continue
            work = work.extended([orient(work, diff, "completion")])
            added += 1
        if not added:
            return work
        log.debug(f"completion of {pres.name}: round added {added} rules")
    raise CompletionError(f"{pres.name}: completion did not stabilise within {rounds} rounds")


def normal_words(pres: Presentation, max_length: int, alphabet: Optional[Sequence[Letter]] = None) -> List[Word]:
    """Irreducible words of length <= max_length, shortest first."""
    letters = tuple(alphabet) if alphabet is not None else pres.generators
    found: List[Word] = [EMPTY]
    layer: List[Word] = [EMPTY]
    for _ in range(max_length):
        nxt = []
        for word in layer:
            for letter in letters:
                candidate = word + (letter,)
                if pres.is_normal(candidate):
                    nxt.append(candidate)
        found.extend(nxt)
        layer = nxt
    return found
