"""
Text grammar for algebra elements.

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := primary ['^' ['-'] INT]
    primary := INT ['/' INT] | 'q' | 'g[j,k]' | 'det' | 'a[i,j]' | 'p[i,j]'
             | 'd[i]' | 't[i]' | 'x[i]' | '(' expr ')'

`d[i]` is the column-1 entry a[i,1]; negative exponents on a[i,1]/d[i],
p[1,1], t[i] and det select the inverse letters when the context admits them.
Indices are always bracketed so two-digit indices tokenize unambiguously.
"""

from fractions import Fraction
from typing import Callable, List, Optional, Protocol

import pyparsing as pp

from app.services.algebra.coeff import Scalar, format_scalar
from app.services.algebra.freealg import (
    A,
    DET_INV,
    INV_D,
    INV_T,
    P,
    P11_INV,
    T,
    X,
    Letter,
    NcPoly,
    TensorPoly,
    Word,
    format_word,
    generic_word_key,
)
from app.utils.errors import GrammarError, NonInvertibleScalarError


class AlgebraContext(Protocol):
    """What the parser needs to know about the target algebra."""

    n: int

    def admits(self, letter: Letter) -> Optional[str]:
        """None when the letter belongs to the algebra, otherwise the reason it does not."""
        ...


class FreeContext:
    """Free algebra on all letter families with indices in 1..n."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"free{n}"

    def admits(self, letter: Letter) -> Optional[str]:
        return index_problem(letter, self.n)


def index_problem(letter: Letter, n: int) -> Optional[str]:
    indices = []
    if letter.family in (A, P):
        indices = [letter.i, letter.j]
    elif letter.family in (INV_D, T, INV_T, X):
        indices = [letter.i]
    for index in indices:
        if not 1 <= index <= n:
            return f"index out of range: {letter.text()} with n={n}"
    return None


class _Atom:
    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value):
        self.kind = kind
        self.value = value


def _inverse_letter(letter: Letter) -> Optional[Letter]:
    if letter.family == A and letter.j == 1:
        return Letter(INV_D, letter.i)
    if letter.family == P and (letter.i, letter.j) == (1, 1):
        return P11_INV
    if letter.family == T:
        return Letter(INV_T, letter.i)
    return None


class _GrammarBuilder:
    def __init__(self, context: Optional[AlgebraContext]):
        self.context = context

    def check(self, text: str, loc: int, letter: Letter) -> None:
        if self.context is None:
            return
        reason = self.context.admits(letter)
        if reason:
            raise pp.ParseFatalException(text, loc, reason)

    # parse actions -----------------------------------------------------
    def number(self, text, loc, toks):
        numerator = int(toks[0])
        denominator = int(toks[1]) if len(toks) > 1 else 1
        if denominator == 0:
            raise pp.ParseFatalException(text, loc, "division by zero")
        return _Atom("scalar", Scalar.rational(Fraction(numerator, denominator)))

    def phase(self, text, loc, toks):
        j, k = int(toks[1]), int(toks[2])
        n = getattr(self.context, "n", None)
        if j == k:
            raise pp.ParseFatalException(text, loc, "phase symbol needs distinct indices")
        if n is not None and not (1 <= j <= n and 1 <= k <= n):
            raise pp.ParseFatalException(text, loc, f"index out of range: g[{j},{k}] with n={n}")
        return _Atom("scalar", Scalar.g(j, k))

    def matrix_letter(self, text, loc, toks):
        family = A if toks[0] == "a" else P
        return _Atom("letter", (Letter(family, int(toks[1]), int(toks[2])), loc))

    def vector_letter(self, text, loc, toks):
        name, index = toks[0], int(toks[1])
        letter = {"d": Letter(A, index, 1), "t": Letter(T, index), "x": Letter(X, index)}[name]
        return _Atom("letter", (letter, loc))

    def factor(self, text, loc, toks):
        atom = toks[0]
        exponent = int(toks[1]) if len(toks) > 1 else None
        if atom.kind == "scalar":
            try:
                value = atom.value if exponent is None else atom.value ** exponent
            except NonInvertibleScalarError as exc:
                raise pp.ParseFatalException(text, loc, str(exc))
            return NcPoly.constant(value)
        if atom.kind == "det":
            if exponent is None or exponent >= 0:
                raise pp.ParseFatalException(text, loc, "det is only available as det^-1")
            self.check(text, loc, DET_INV)
            return NcPoly.word((DET_INV,) * (-exponent))
        if atom.kind == "letter":
            letter, letter_loc = atom.value
            if exponent is None or exponent >= 0:
                self.check(text, letter_loc, letter)
                return NcPoly.word((letter,) * (1 if exponent is None else exponent))
            inverse = _inverse_letter(letter)
            if inverse is None:
                raise pp.ParseFatalException(text, letter_loc, f"{letter.text()} has no inverse")
            self.check(text, letter_loc, inverse)
            return NcPoly.word((inverse,) * (-exponent))
        poly: NcPoly = atom.value
        if exponent is None:
            return poly
        if exponent >= 0:
            return poly ** exponent
        if len(poly) == 1 and poly.words() == ((),):
            try:
                return NcPoly.constant(poly.coefficient(()) ** exponent)
            except NonInvertibleScalarError as exc:
                raise pp.ParseFatalException(text, loc, str(exc))
        raise pp.ParseFatalException(text, loc, "negative power of a non-monomial expression")

    @staticmethod
    def term(toks):
        result = NcPoly.one()
        for factor in toks:
            result = result * factor
        return result

    @staticmethod
    def expression(toks):
        result = NcPoly.zero()
        sign = 1
        for tok in toks:
            if isinstance(tok, str):
                sign = -1 if tok == "-" else 1
                continue
            result = result + (tok if sign > 0 else -tok)
            sign = 1
        return result

    def build(self) -> pp.ParserElement:
        LBRACK, RBRACK, COMMA, LPAR, RPAR = map(pp.Suppress, "[],()")
        integer = pp.Word(pp.nums)
        signed = pp.Combine(pp.Optional("-") + pp.Word(pp.nums))

        expr = pp.Forward()
        number = (integer + pp.Optional(pp.Suppress("/") + integer)).set_parse_action(self.number)
        q_symbol = pp.Keyword("q").set_parse_action(lambda: _Atom("scalar", Scalar.q()))
        det = pp.Keyword("det").set_parse_action(lambda: _Atom("det", None))
        phase = (pp.Literal("g") + LBRACK + integer + COMMA + integer + RBRACK).set_parse_action(self.phase)
        matrix = (pp.one_of("a p") + LBRACK + integer + COMMA + integer + RBRACK).set_parse_action(
            self.matrix_letter
        )
        vector = (pp.one_of("d t x") + LBRACK + integer + RBRACK).set_parse_action(self.vector_letter)
        group = (LPAR + expr + RPAR).set_parse_action(lambda toks: _Atom("poly", toks[0]))

        primary = number | q_symbol | det | phase | matrix | vector | group
        factor = (primary + pp.Optional(pp.Suppress("^") + signed)).set_parse_action(self.factor)
        term = (factor + pp.ZeroOrMore(pp.Suppress("*") + factor)).set_parse_action(self.term)
        sign = pp.one_of("+ -")
        expr <<= (pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)).set_parse_action(self.expression)
        return expr + pp.StringEnd()


def parse(text: str, context: Optional[AlgebraContext] = None) -> NcPoly:
    """Parse an expression into the free algebra (no reduction)."""
    if text is None or not text.strip():
        raise GrammarError("empty input", 0)
    grammar = _GrammarBuilder(context).build()
    try:
        result = grammar.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise GrammarError(exc.msg, exc.loc) from None
    return result[0]


def parse_lines(lines: List[str], context: Optional[AlgebraContext] = None) -> List[NcPoly]:
    """One expression per line; blank lines and `#` comments are skipped."""
    polys = []
    for line in lines:
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            polys.append(parse(stripped, context))
    return polys


def _coefficient_text(coef: Scalar, has_word: bool, parenthesize: bool):
    """Returns (sign, body) where body is '' for a unit coefficient on a word."""
    if coef.is_monomial():
        text = format_scalar(coef)
        sign = -1 if text.startswith("-") else 1
        body = text.lstrip("-")
        if has_word and body == "1":
            body = ""
        return sign, body
    sign = coef.leading_sign()
    inner = format_scalar(coef if sign > 0 else -coef)
    if has_word or parenthesize:
        inner = f"({inner})"
    return sign, inner


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = []
    for index, (sign, body) in enumerate(pieces):
        if index == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def format_poly(poly: NcPoly, order_key: Optional[Callable[[Word], tuple]] = None) -> str:
    """Canonical text; terms ascend in the given term order."""
    pieces = []
    many = len(poly) > 1
    for word, coef in poly.items(order_key or generic_word_key):
        sign, body = _coefficient_text(coef, bool(word), many)
        if word:
            body = f"{body}*{format_word(word)}" if body else format_word(word)
        pieces.append((sign, body))
    return _join(pieces)


def format_tensor(tensor: TensorPoly) -> str:
    pieces = []
    many = len(tensor.terms) > 1
    for key, coef in tensor.items():
        sign, body = _coefficient_text(coef, True, many)
        legs = " (x) ".join(format_word(word) for word in key)
        pieces.append((sign, f"{body}*({legs})" if body else legs))
    return _join(pieces)
