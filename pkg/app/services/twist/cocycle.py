"""
Diagonal torus 2-cocycles and the twisted products they induce.

Every letter carries a left (row) and a right (column) torus weight in Z^n.  A
CocycleSpec is an antisymmetric bicharacter on Z^n whose values are Laurent
monomials in the phase symbols g[j,k]; Γ twists a product by γ^-1 of the right
weights, Σ by σ of the left weights.  A word read as an iterated twisted
product differs from the plain word by the phase `Twist.word_phase`, which is
how relations are transported into the twisted algebras.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import A, INV_D, INV_DET, INV_P11, INV_T, P, T, X, Letter, NcPoly, Word, _accumulate
from app.utils.errors import PresentationError

Weight = Tuple[int, ...]
PhaseExponents = Dict[Tuple[int, int], int]


class TwistMode(str, Enum):
    GAMMA = "gamma"
    SIGMA = "sigma"
    BOTH = "both"


def _unit(n: int, index: int, sign: int = 1) -> Weight:
    return tuple(sign if position == index else 0 for position in range(1, n + 1))


def letter_weights(letter: Letter, n: int) -> Tuple[Weight, Weight]:
    """(left, right) torus weight of one letter."""
    family = letter.family
    if family in (A, P):
        return _unit(n, letter.i), _unit(n, letter.j)
    if family == INV_D:
        return _unit(n, letter.i, -1), _unit(n, 1, -1)
    if family == INV_P11:
        return _unit(n, 1, -1), _unit(n, 1, -1)
    if family == T:
        return _unit(n, letter.i), _unit(n, letter.i)
    if family == INV_T:
        return _unit(n, letter.i, -1), _unit(n, letter.i, -1)
    if family == INV_DET:
        return (-1,) * n, (-1,) * n
    if family == X:
        return _unit(n, letter.i), _unit(n, 1)
    raise PresentationError(f"letter {letter.text()} has no torus weight")


def _add(u: Weight, v: Weight) -> Weight:
    return tuple(a + b for a, b in zip(u, v))


def weights(word: Word, n: int) -> Tuple[Weight, Weight]:
    left, right = (0,) * n, (0,) * n
    for letter in word:
        lw, rw = letter_weights(letter, n)
        left, right = _add(left, lw), _add(right, rw)
    return left, right


def normalize(weight: Weight) -> Weight:
    """Representative modulo the all-ones vector with minimum entry 0."""
    low = min(weight)
    return tuple(w - low for w in weight)


def permute_weight(u: Weight, permutation: Sequence[int]) -> Weight:
    """Move the entry at index i to index permutation[i-1]."""
    out = [0] * len(u)
    for index, value in enumerate(u):
        out[permutation[index] - 1] = value
    return tuple(out)


def format_weight(weight: Weight) -> str:
    factors = []
    for index, power in enumerate(normalize(weight), start=1):
        if power == 1:
            factors.append(f"t{index}")
        elif power:
            factors.append(f"t{index}^{power}")
    return "*".join(factors) or "1"


@dataclass(frozen=True, eq=False)
class CocycleSpec:
    """γ(e_j, e_k) = Π g[a,b]^m over `table[(j, k)]` for j < k; antisymmetric by construction."""

    n: int
    table: Mapping[Tuple[int, int], Mapping[Tuple[int, int], int]]
    permutation: Optional[Tuple[int, ...]] = None
    label: str = "free"
    _cache: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def free(cls, n: int) -> "CocycleSpec":
        return cls(n, {(j, k): {(j, k): 1} for j in range(1, n + 1) for k in range(j + 1, n + 1)}, label="free")

    @classmethod
    def balanced(cls, n: int) -> "CocycleSpec":
        """γ(e_i, 1..1) = 1: g[j,n] is replaced by Π_{k<n, k≠j} g[j,k]^-1."""
        table: Dict[Tuple[int, int], Dict[Tuple[int, int], int]] = {}
        for j in range(1, n):
            for k in range(j + 1, n):
                table[(j, k)] = {(j, k): 1}
            last: Dict[Tuple[int, int], int] = {}
            for k in range(1, n):
                if k == j:
                    continue
                key, sign = ((j, k), 1) if j < k else ((k, j), -1)
                last[key] = last.get(key, 0) - sign
            table[(j, n)] = last
        return cls(n, table, label="balanced")

    @classmethod
    def trivial(cls, n: int) -> "CocycleSpec":
        return cls(n, {}, label="trivial")

    def permuted(self, permutation: Sequence[int]) -> "CocycleSpec":
        """u -> γ(u∘perm, v∘perm); permutation[i-1] is the image of index i."""
        return CocycleSpec(self.n, self.table, tuple(permutation), f"{self.label}∘perm")

    def substituted(self, exponents: Mapping[Tuple[int, int], int]) -> "CocycleSpec":
        """Replace g[j,k] by g[j,k]^m."""
        table = {
            pair: {symbol: power * exponents.get(symbol, 1) for symbol, power in entry.items()}
            for pair, entry in self.table.items()
        }
        return CocycleSpec(self.n, table, self.permutation, f"{self.label}^θ")

    def _entry(self, j: int, k: int) -> Mapping[Tuple[int, int], int]:
        return self.table.get((j, k), {})

    def _apply_permutation(self, u: Weight) -> Weight:
        return u if self.permutation is None else permute_weight(u, self.permutation)

    def exponents(self, u: Weight, v: Weight) -> PhaseExponents:
        u, v = self._apply_permutation(u), self._apply_permutation(v)
        total: PhaseExponents = {}
        for j in range(self.n):
            for k in range(j + 1, self.n):
                power = u[j] * v[k] - u[k] * v[j]
                if not power:
                    continue
                for symbol, m in self._entry(j + 1, k + 1).items():
                    total[symbol] = total.get(symbol, 0) + power * m
        return {symbol: m for symbol, m in total.items() if m}

    def __call__(self, u: Weight, v: Weight) -> Scalar:
        key = (u, v)
        cached = self._cache.get(key)
        if cached is None:
            cached = Scalar.monomial(1, 0, self.exponents(u, v))
            self._cache[key] = cached
        return cached

    def is_balanced(self) -> bool:
        ones = (1,) * self.n
        return all(not self.exponents(_unit(self.n, i), ones) for i in range(1, self.n + 1))


def eval_gamma(spec: CocycleSpec, u: Weight, v: Weight) -> Scalar:
    return spec(u, v)


def chart_permutation(n: int, k: int) -> Tuple[int, ...]:
    """Where the cleaving map j_k sends row indices: 1 goes to k, 2..k move down by one, the rest stay."""
    return (k,) + tuple(index - 1 if index <= k else index for index in range(2, n + 1))


@dataclass(frozen=True)
class Twist:
    """A twisted product on an algebra whose letters carry torus weights."""

    n: int
    mode: TwistMode
    gamma: CocycleSpec
    sigma: CocycleSpec

    @classmethod
    def from_cocycle(cls, cocycle: CocycleSpec, mode: TwistMode = TwistMode.BOTH) -> "Twist":
        return cls(cocycle.n, mode, cocycle, cocycle)

    def with_sigma(self, sigma: CocycleSpec) -> "Twist":
        return Twist(self.n, self.mode, self.gamma, sigma)

    def pair_phase(self, left_a: Weight, right_a: Weight, left_b: Weight, right_b: Weight) -> Scalar:
        phase = Scalar.one()
        if self.mode in (TwistMode.SIGMA, TwistMode.BOTH):
            phase = phase * self.sigma(left_a, left_b)
        if self.mode in (TwistMode.GAMMA, TwistMode.BOTH):
            phase = phase * self.gamma(right_a, right_b).inverse()
        return phase

    def product_phase(self, first: Word, second: Word) -> Scalar:
        la, ra = weights(first, self.n)
        lb, rb = weights(second, self.n)
        return self.pair_phase(la, ra, lb, rb)

    def word_phase(self, word: Word) -> Scalar:
        """x1∘x2∘…∘xm = word_phase · x1x2…xm."""
        phase = Scalar.one()
        left, right = (0,) * self.n, (0,) * self.n
        for letter in word:
            lw, rw = letter_weights(letter, self.n)
            phase = phase * self.pair_phase(left, right, lw, rw)
            left, right = _add(left, lw), _add(right, rw)
        return phase

    def to_twisted(self, poly: NcPoly) -> NcPoly:
        """Rewrite plain words as twisted words: w = word_phase(w)^-1 · w°."""
        out: Dict[Word, Scalar] = {}
        for word, coef in poly.terms.items():
            _accumulate(out, word, coef * self.word_phase(word).inverse())
        return NcPoly._raw(out)

    def from_twisted(self, poly: NcPoly) -> NcPoly:
        out: Dict[Word, Scalar] = {}
        for word, coef in poly.terms.items():
            _accumulate(out, word, coef * self.word_phase(word))
        return NcPoly._raw(out)


def twisted_product(twist: Twist, p: NcPoly, r: NcPoly, reducer) -> NcPoly:
    """p ∘ r computed termwise from the plain product in `reducer`, then reduced."""
    out: Dict[Word, Scalar] = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in r.terms.items():
            phase = twist.product_phase(w1, w2)
            for word, c in reducer.normal_form_word(w1 + w2).items():
                _accumulate(out, word, c1 * c2 * phase * c)
    return NcPoly._raw(out)


def twisted_power(twist: Twist, factors: Iterable[NcPoly], reducer) -> NcPoly:
    result = NcPoly.one()
    for factor in factors:
        result = twisted_product(twist, result, factor, reducer)
    return result


def parse_theta(lines: Iterable[str]) -> Dict[Tuple[int, int], int]:
    """`j k m` (or `j k g^m`) per line: g[j,k] -> g[j,k]^m; '#' starts a comment."""
    exponents: Dict[Tuple[int, int], int] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise PresentationError(f"theta line {number}: expected 'j k m', got {raw.strip()!r}")
        power = parts[2][2:] if parts[2].startswith("g^") else parts[2]
        try:
            j, k, m = int(parts[0]), int(parts[1]), int(power)
        except ValueError:
            raise PresentationError(f"theta line {number}: exponents must be integers, got {raw.strip()!r}")
        if j >= k:
            raise PresentationError(f"theta line {number}: need j < k, got {j} {k}")
        exponents[(j, k)] = m
    return exponents
