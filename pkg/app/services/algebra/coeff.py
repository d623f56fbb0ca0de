"""
Exact arithmetic in the coefficient ring Q[q, q^-1][g_jk^{±1}].

A Scalar is a finite sum of rational multiples of Laurent monomials
q^e * prod g[j,k]^m (j < k).  The phase symbols are formal and invertible,
with g[k,j] read as g[j,k]^-1 and g[j,j] as 1.
"""

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from app.utils.errors import NonInvertibleScalarError, SpecializationError

# ((j, k, m), ...) sorted by (j, k), m != 0
PhaseKey = Tuple[Tuple[int, int, int], ...]
# (q exponent, phase exponents)
MonoKey = Tuple[int, PhaseKey]

Number = Union[int, Fraction]


def _merge_phases(left: PhaseKey, right: PhaseKey, sign: int = 1) -> PhaseKey:
    if not right:
        return left
    exps: Dict[Tuple[int, int], int] = {(j, k): m for j, k, m in left}
    for j, k, m in right:
        total = exps.get((j, k), 0) + sign * m
        if total:
            exps[(j, k)] = total
        else:
            exps.pop((j, k), None)
    return tuple(sorted((j, k, m) for (j, k), m in exps.items()))


def _phase_key(exps: Mapping[Tuple[int, int], int]) -> PhaseKey:
    canonical: Dict[Tuple[int, int], int] = {}
    for (j, k), m in exps.items():
        if j == k or m == 0:
            continue
        if j > k:
            j, k, m = k, j, -m
        canonical[(j, k)] = canonical.get((j, k), 0) + m
    return tuple(sorted((j, k, m) for (j, k), m in canonical.items() if m))


class Scalar:
    """Immutable element of the coefficient ring."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[MonoKey, Number]] = None):
        clean: Dict[MonoKey, Fraction] = {}
        if terms:
            for key, coef in terms.items():
                if coef:
                    clean[key] = Fraction(coef)
        self._terms = clean
        self._hash: Optional[int] = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[MonoKey, Fraction]) -> "Scalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "Scalar":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Scalar":
        return cls._raw({(0, ()): Fraction(1)})

    @classmethod
    def rational(cls, value: Number) -> "Scalar":
        value = Fraction(value)
        return cls._raw({(0, ()): value} if value else {})

    @classmethod
    def q(cls, exponent: int = 1) -> "Scalar":
        return cls._raw({(exponent, ()): Fraction(1)})

    @classmethod
    def g(cls, j: int, k: int, exponent: int = 1) -> "Scalar":
        return cls._raw({(0, _phase_key({(j, k): exponent})): Fraction(1)})

    @classmethod
    def monomial(
        cls,
        coef: Number = 1,
        q_exp: int = 0,
        phases: Optional[Mapping[Tuple[int, int], int]] = None,
    ) -> "Scalar":
        coef = Fraction(coef)
        if not coef:
            return cls.zero()
        return cls._raw({(q_exp, _phase_key(phases or {})): coef})

    @classmethod
    def coerce(cls, value: Union["Scalar", Number]) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls.rational(value)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Mapping[MonoKey, Fraction]:
        return self._terms

    def items(self) -> Iterator[Tuple[MonoKey, Fraction]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {(0, ()): Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def phase_symbols(self) -> Tuple[Tuple[int, int], ...]:
        seen = {(j, k) for (_, phases) in self._terms for j, k, _ in phases}
        return tuple(sorted(seen))

    def has_phases(self) -> bool:
        return any(phases for (_, phases) in self._terms)

    # -- ring operations ----------------------------------------------
    def __add__(self, other: Union["Scalar", Number]) -> "Scalar":
        other = Scalar.coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for key, coef in other._terms.items():
            total = out.get(key, 0) + coef
            if total:
                out[key] = total
            else:
                out.pop(key, None)
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({key: -coef for key, coef in self._terms.items()})

    def __sub__(self, other: Union["Scalar", Number]) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other: Union["Scalar", Number]) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: Union["Scalar", Number]) -> "Scalar":
        if not isinstance(other, Scalar):
            factor = Fraction(other)
            if not factor:
                return Scalar.zero()
            return Scalar._raw({key: coef * factor for key, coef in self._terms.items()})
        if not self._terms or not other._terms:
            return Scalar.zero()
        out: Dict[MonoKey, Fraction] = {}
        for (qa, ga), ca in self._terms.items():
            for (qb, gb), cb in other._terms.items():
                key = (qa + qb, _merge_phases(ga, gb))
                total = out.get(key, 0) + ca * cb
                if total:
                    out[key] = total
                else:
                    out.pop(key, None)
        return Scalar._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Inverse of a monomial scalar."""
        if len(self._terms) != 1:
            detail = "zero" if not self._terms else f"{len(self._terms)} terms"
            raise NonInvertibleScalarError(detail)
        ((q_exp, phases), coef), = self._terms.items()
        inverted = tuple((j, k, -m) for j, k, m in phases)
        return Scalar._raw({(-q_exp, inverted): 1 / coef})

    def __truediv__(self, other: Union["Scalar", Number]) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- equality -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitutions ------------------------------------------------
    def specialize(self, q_value: Number, phases_to_one: bool = False) -> "Scalar":
        return specialize(self, q_value, phases_to_one)

    def substitute_phases(self, table: Mapping[Tuple[int, int], "Scalar"]) -> "Scalar":
        """Replace phase symbols g[j,k] by monomial scalars from `table`."""
        result = Scalar.zero()
        for (q_exp, phases), coef in self._terms.items():
            term = Scalar._raw({(q_exp, ()): coef})
            for j, k, m in phases:
                image = table.get((j, k))
                term = term * (image ** m if image is not None else Scalar.g(j, k, m))
            result = result + term
        return result

    def to_sympy(self, symbols: "SymbolTable"):
        total = 0
        for (q_exp, phases), coef in self._terms.items():
            term = symbols.rational(coef) * symbols.q ** q_exp
            for j, k, m in phases:
                term = term * symbols.phase(j, k) ** m
            total = total + term
        return total

    # -- text ---------------------------------------------------------
    def leading_sign(self) -> int:
        if not self._terms:
            return 1
        _, coef = min(self._terms.items())
        return 1 if coef > 0 else -1

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"


class SymbolTable:
    """Lazily created sympy symbols for q and the phases (used by exact linear algebra)."""

    def __init__(self):
        import sympy

        self._sympy = sympy
        self.q = sympy.Symbol("q")
        self._phases: Dict[Tuple[int, int], object] = {}

    def phase(self, j: int, k: int):
        if (j, k) not in self._phases:
            self._phases[(j, k)] = self._sympy.Symbol(f"g_{j}_{k}")
        return self._phases[(j, k)]

    def rational(self, value: Fraction):
        return self._sympy.Rational(value.numerator, value.denominator)


def specialize(s: Scalar, q_value: Number, phases_to_one: bool = False) -> Scalar:
    """Substitute q -> q_value (and optionally every g -> 1)."""
    q_value = Fraction(q_value)
    if q_value == 0:
        raise SpecializationError("q_value must be nonzero")
    out: Dict[MonoKey, Fraction] = {}
    for (q_exp, phases), coef in s.terms.items():
        key = (0, () if phases_to_one else phases)
        total = out.get(key, 0) + coef * q_value ** q_exp
        if total:
            out[key] = total
        else:
            out.pop(key, None)
    return Scalar._raw(out)


def _format_monomial(q_exp: int, phases: PhaseKey, coef: Fraction) -> str:
    factors = []
    if q_exp == 1:
        factors.append("q")
    elif q_exp:
        factors.append(f"q^{q_exp}")
    for j, k, m in phases:
        factors.append(f"g[{j},{k}]" if m == 1 else f"g[{j},{k}]^{m}")
    magnitude = abs(coef)
    if magnitude != 1 or not factors:
        factors.insert(0, str(magnitude))
    sign = "-" if coef < 0 else ""
    return sign + "*".join(factors)


def format_scalar(s: Scalar) -> str:
    if s.is_zero():
        return "0"
    pieces = []
    for index, ((q_exp, phases), coef) in enumerate(s.items()):
        text = _format_monomial(q_exp, phases, coef)
        if index == 0:
            pieces.append(text)
        elif text.startswith("-"):
            pieces.append(f" - {text[1:]}")
        else:
            pieces.append(f" + {text}")
    return "".join(pieces)


def sum_scalars(values: Iterable[Scalar]) -> Scalar:
    total = Scalar.zero()
    for value in values:
        total = total + value
    return total


LAMBDA = Scalar.q(-1) - Scalar.q(1)
"""The recurring Manin coefficient q^-1 - q."""
