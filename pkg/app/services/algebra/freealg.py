"""
Words, noncommutative polynomials and tensor powers over the coefficient ring.

Nothing here reduces modulo relations; presented algebras (rewrite.Presentation
and its localized variants) supply normal forms through `normal_form_word`.
"""

from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Protocol,
    Sequence,
    Tuple,
    Union,
)

from app.services.algebra.coeff import Number, Scalar
from app.utils.errors import TensorMismatchError

# letter families
A = "a"
INV_D = "inv_d"
P = "p"
INV_P11 = "inv_p11"
T = "t"
INV_T = "inv_t"
INV_DET = "inv_det"
X = "x"

FAMILY_ORDER = {INV_DET: 0, INV_D: 1, A: 2, INV_P11: 3, P: 4, INV_T: 5, T: 6, X: 7}
INVERSE_FAMILIES = frozenset({INV_D, INV_P11, INV_T, INV_DET})


class Letter(NamedTuple):
    family: str
    i: int = 0
    j: int = 0

    @property
    def is_inverse(self) -> bool:
        return self.family in INVERSE_FAMILIES

    def text(self) -> str:
        if self.family in (A, P):
            return f"{self.family}[{self.i},{self.j}]"
        if self.family == INV_D:
            return f"d[{self.i}]^-1"
        if self.family == INV_P11:
            return "p[1,1]^-1"
        if self.family == T:
            return f"t[{self.i}]"
        if self.family == INV_T:
            return f"t[{self.i}]^-1"
        if self.family == INV_DET:
            return "det^-1"
        return f"x[{self.i}]"

    def __str__(self) -> str:
        return self.text()


def a(i: int, j: int) -> Letter:
    return Letter(A, i, j)


def d_inv(i: int) -> Letter:
    return Letter(INV_D, i)


def p(i: int, j: int) -> Letter:
    return Letter(P, i, j)


def t(i: int) -> Letter:
    return Letter(T, i)


def t_inv(i: int) -> Letter:
    return Letter(INV_T, i)


def x(i: int) -> Letter:
    return Letter(X, i)


P11_INV = Letter(INV_P11, 1, 1)
DET_INV = Letter(INV_DET)

Word = Tuple[Letter, ...]
EMPTY: Word = ()


def letter_sort_key(letter: Letter) -> Tuple[int, int, int]:
    return (FAMILY_ORDER[letter.family], letter.i, letter.j)


def generic_word_key(word: Word) -> tuple:
    return (len(word), tuple(letter_sort_key(letter) for letter in word))


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return "*".join(letter.text() for letter in word)


def word_degree(word: Word) -> int:
    """Non-inverse letters count +1, inverse letters -1."""
    return sum(-1 if letter.is_inverse else 1 for letter in word)


class Reducer(Protocol):
    """Anything that can put words of its algebra into normal form."""

    name: str

    def normal_form_word(self, word: Word) -> Mapping[Word, Scalar]:
        ...

    def order_key(self, word: Word) -> tuple:
        ...


Coefficient = Union[Scalar, Number]


def _accumulate(target: Dict, key, value: Scalar) -> None:
    total = target.get(key)
    total = value if total is None else total + value
    if total.is_zero():
        target.pop(key, None)
    else:
        target[key] = total


class NcPoly:
    """Finite Scalar-weighted sum of words."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Word, Coefficient]] = None):
        clean: Dict[Word, Scalar] = {}
        if terms:
            for word, coef in terms.items():
                coef = Scalar.coerce(coef)
                if not coef.is_zero():
                    clean[tuple(word)] = coef
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Word, Scalar]) -> "NcPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "NcPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "NcPoly":
        return cls._raw({EMPTY: Scalar.one()})

    @classmethod
    def constant(cls, value: Coefficient) -> "NcPoly":
        value = Scalar.coerce(value)
        return cls._raw({} if value.is_zero() else {EMPTY: value})

    @classmethod
    def word(cls, word: Iterable[Letter], coef: Coefficient = 1) -> "NcPoly":
        return cls({tuple(word): coef})

    @classmethod
    def letter(cls, letter: Letter) -> "NcPoly":
        return cls._raw({(letter,): Scalar.one()})

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        return self._terms

    def items(self, key: Optional[Callable[[Word], tuple]] = None) -> Iterator[Tuple[Word, Scalar]]:
        order = key or generic_word_key
        return iter(sorted(self._terms.items(), key=lambda item: order(item[0])))

    def words(self) -> Tuple[Word, ...]:
        return tuple(self._terms)

    def letters(self) -> frozenset:
        return frozenset(letter for word in self._terms for letter in word)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Word) -> Scalar:
        return self._terms.get(tuple(word), Scalar.zero())

    def max_length(self) -> int:
        return max((len(word) for word in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            other = NcPoly.constant(other)
        out = dict(self._terms)
        for word, coef in other._terms.items():
            _accumulate(out, word, coef)
        return NcPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NcPoly":
        return NcPoly._raw({word: -coef for word, coef in self._terms.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            other = NcPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "NcPoly":
        return NcPoly.constant(other) - self

    def scale(self, factor: Coefficient) -> "NcPoly":
        factor = Scalar.coerce(factor)
        if factor.is_zero():
            return NcPoly.zero()
        return NcPoly._raw({word: coef * factor for word, coef in self._terms.items()})

    def __mul__(self, other) -> "NcPoly":
        if not isinstance(other, NcPoly):
            return self.scale(other)
        out: Dict[Word, Scalar] = {}
        for left, cl in self._terms.items():
            for right, cr in other._terms.items():
                _accumulate(out, left + right, cl * cr)
        return NcPoly._raw(out)

    def __rmul__(self, other) -> "NcPoly":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "NcPoly":
        result = NcPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "NcPoly":
        out: Dict[Word, Scalar] = {}
        for word, coef in self._terms.items():
            _accumulate(out, word, fn(coef))
        return NcPoly._raw(out)

    def substitute(self, image: Callable[[Letter], "NcPoly"], reduce: Optional[Callable[["NcPoly"], "NcPoly"]] = None) -> "NcPoly":
        """Algebra-map extension of a letter table; `reduce` is applied after every letter."""
        total = NcPoly.zero()
        for word, coef in self._terms.items():
            acc = NcPoly.constant(coef)
            for letter in word:
                acc = acc * image(letter)
                if reduce is not None:
                    acc = reduce(acc)
                if acc.is_zero():
                    break
            total = total + acc
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        from app.services.algebra.grammar import format_poly

        return f"NcPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        from app.services.algebra.grammar import format_poly

        return format_poly(self)


TensorKey = Tuple[Word, ...]


def _leg_name(algebra) -> str:
    return getattr(algebra, "name", "free") if algebra is not None else "free"


class TensorPoly:
    """Element of a tensor power; one word per leg."""

    __slots__ = ("algebras", "_terms")

    def __init__(self, algebras: Sequence, terms: Optional[Mapping[TensorKey, Coefficient]] = None):
        if not algebras:
            raise TensorMismatchError("tensor rank must be positive")
        self.algebras = tuple(algebras)
        clean: Dict[TensorKey, Scalar] = {}
        if terms:
            for key, coef in terms.items():
                if len(key) != len(self.algebras):
                    raise TensorMismatchError(f"key of rank {len(key)} in rank-{self.rank} tensor")
                coef = Scalar.coerce(coef)
                if not coef.is_zero():
                    clean[tuple(tuple(leg) for leg in key)] = coef
        self._terms = clean

    @classmethod
    def _raw(cls, algebras: tuple, terms: Dict[TensorKey, Scalar]) -> "TensorPoly":
        obj = cls.__new__(cls)
        obj.algebras = algebras
        obj._terms = terms
        return obj

    @classmethod
    def unit(cls, algebras: Sequence) -> "TensorPoly":
        algebras = tuple(algebras)
        return cls._raw(algebras, {tuple(EMPTY for _ in algebras): Scalar.one()})

    @classmethod
    def from_polys(cls, algebras: Sequence, polys: Sequence[NcPoly]) -> "TensorPoly":
        """Pure tensor p_1 (x) ... (x) p_r."""
        algebras = tuple(algebras)
        if len(polys) != len(algebras):
            raise TensorMismatchError("number of factors differs from tensor rank")
        terms: Dict[TensorKey, Scalar] = {(): Scalar.one()}
        for poly in polys:
            nxt: Dict[TensorKey, Scalar] = {}
            for key, coef in terms.items():
                for word, c in poly.terms.items():
                    _accumulate(nxt, key + (word,), coef * c)
            terms = nxt
        return cls._raw(algebras, terms)

    @property
    def rank(self) -> int:
        return len(self.algebras)

    @property
    def leg_names(self) -> Tuple[str, ...]:
        return tuple(_leg_name(alg) for alg in self.algebras)

    @property
    def terms(self) -> Mapping[TensorKey, Scalar]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[Tuple[TensorKey, Scalar]]:
        def key(item):
            return tuple(
                (alg.order_key(word) if alg is not None else generic_word_key(word))
                for alg, word in zip(self.algebras, item[0])
            )

        return iter(sorted(self._terms.items(), key=key))

    def _check_compatible(self, other: "TensorPoly") -> None:
        if self.rank != other.rank:
            raise TensorMismatchError(f"rank {self.rank} vs rank {other.rank}")
        if self.leg_names != other.leg_names:
            raise TensorMismatchError(f"legs {self.leg_names} vs {other.leg_names}")

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        self._check_compatible(other)
        out = dict(self._terms)
        for key, coef in other._terms.items():
            _accumulate(out, key, coef)
        return TensorPoly._raw(self.algebras, out)

    def __neg__(self) -> "TensorPoly":
        return TensorPoly._raw(self.algebras, {key: -coef for key, coef in self._terms.items()})

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def scale(self, factor: Coefficient) -> "TensorPoly":
        factor = Scalar.coerce(factor)
        if factor.is_zero():
            return TensorPoly._raw(self.algebras, {})
        return TensorPoly._raw(self.algebras, {key: coef * factor for key, coef in self._terms.items()})

    def __mul__(self, other) -> "TensorPoly":
        if isinstance(other, TensorPoly):
            return tensor_mul(self, other)
        return self.scale(other)

    def reduced(self) -> "TensorPoly":
        """Put every leg into the normal form of its algebra."""
        out: Dict[TensorKey, Scalar] = {}
        for key, coef in self._terms.items():
            partial: Dict[TensorKey, Scalar] = {(): coef}
            for alg, word in zip(self.algebras, key):
                expansion = {word: Scalar.one()} if alg is None else alg.normal_form_word(word)
                nxt: Dict[TensorKey, Scalar] = {}
                for prefix, c in partial.items():
                    for nf_word, c2 in expansion.items():
                        _accumulate(nxt, prefix + (nf_word,), c * c2)
                partial = nxt
                if not partial:
                    break
            for full, c in partial.items():
                _accumulate(out, full, c)
        return TensorPoly._raw(self.algebras, out)

    def cleared(self, multipliers: Optional[Sequence[Word]] = None) -> "TensorPoly":
        """Reduce, then left-multiply every localized leg by its clearing word and reduce again."""
        current = self.reduced()
        if multipliers is None:
            multipliers = clearing_words([current])
        if not any(multipliers):
            return current
        maps = [(lambda w, m=m: NcPoly.word(m + w)) if m else None for m in multipliers]
        return current.map_legs(self.algebras, maps).reduced()

    def vanishes(self) -> bool:
        """Exact zero test, also when a leg has non-unique localized normal forms."""
        return self.cleared().is_zero()

    def map_legs(self, algebras: Sequence, maps: Sequence[Optional[Callable[[Word], NcPoly]]]) -> "TensorPoly":
        """Apply a linear map per leg (None keeps the leg); result lives over `algebras`."""
        out: Dict[TensorKey, Scalar] = {}
        for key, coef in self._terms.items():
            partial: Dict[TensorKey, Scalar] = {(): coef}
            for fn, word in zip(maps, key):
                image = {word: Scalar.one()} if fn is None else fn(word).terms
                nxt: Dict[TensorKey, Scalar] = {}
                for prefix, c in partial.items():
                    for w2, c2 in image.items():
                        _accumulate(nxt, prefix + (w2,), c * c2)
                partial = nxt
            for full, c in partial.items():
                _accumulate(out, full, c)
        return TensorPoly._raw(tuple(algebras), out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.leg_names == other.leg_names and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.leg_names, frozenset(self._terms.items())))

    def __str__(self) -> str:
        from app.services.algebra.grammar import format_tensor

        return format_tensor(self)

    def __repr__(self) -> str:
        return f"TensorPoly({self!s})"


def tensor_mul(u: TensorPoly, v: TensorPoly) -> TensorPoly:
    """Legwise concatenation (a (x) h)(a' (x) h') = aa' (x) hh'; no reduction."""
    u._check_compatible(v)
    out: Dict[TensorKey, Scalar] = {}
    for ku, cu in u.terms.items():
        for kv, cv in v.terms.items():
            key = tuple(wu + wv for wu, wv in zip(ku, kv))
            _accumulate(out, key, cu * cv)
    return TensorPoly._raw(u.algebras, out)


def clearing_words(tensors: Sequence[TensorPoly]) -> Tuple[Word, ...]:
    """Per-leg multipliers clearing every inverse letter of the given reduced tensors."""
    algebras = tensors[0].algebras
    out = []
    for index, alg in enumerate(algebras):
        clearing = getattr(alg, "clearing_word", None)
        words = [key[index] for tensor in tensors for key in tensor.terms]
        out.append(EMPTY if clearing is None else clearing(words))
    return tuple(out)


def cleared_tensor_vectors(tensors: Sequence[TensorPoly]) -> List[Dict[TensorKey, Scalar]]:
    """Coordinates of tensors for exact rank computations, cleared by common multipliers."""
    if not tensors:
        return []
    reduced = [tensor.reduced() for tensor in tensors]
    multipliers = clearing_words(reduced)
    return [dict(tensor.cleared(multipliers).terms) for tensor in reduced]
