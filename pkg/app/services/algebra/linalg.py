"""
Exact linear algebra over the fraction field of the coefficient ring.

Vectors are sparse maps key -> Scalar (the `terms` of an NcPoly or TensorPoly).
Ranks are computed with sympy's DomainMatrix; a rational specialization is tried
first because it can only under-estimate the generic rank, so a full-rank answer
there is already exact.
"""

from fractions import Fraction
from typing import Hashable, List, Mapping, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.services.algebra.coeff import Scalar, SymbolTable

Vector = Mapping[Hashable, Scalar]

_PROBE_Q = Fraction(7, 3)
_PROBE_PRIMES = (5, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89)


def _probe_phase(j: int, k: int) -> Fraction:
    return Fraction(_PROBE_PRIMES[(j * 7 + k) % len(_PROBE_PRIMES)], 2)


def evaluate(s: Scalar, q_value: Fraction = _PROBE_Q) -> Fraction:
    total = Fraction(0)
    for (q_exp, phases), coef in s.terms.items():
        term = coef * q_value ** q_exp
        for j, k, m in phases:
            term *= _probe_phase(j, k) ** m
        total += term
    return total


def coordinates(vectors: Sequence[Vector]) -> Tuple[List[Hashable], List[List[Scalar]]]:
    keys = sorted({key for vec in vectors for key in vec}, key=repr)
    position = {key: index for index, key in enumerate(keys)}
    rows = []
    for vec in vectors:
        row = [Scalar.zero()] * len(keys)
        for key, coef in vec.items():
            row[position[key]] = coef
        rows.append(row)
    return keys, rows


def _probe_rank(rows: List[List[Scalar]], width: int) -> int:
    entries = [[QQ(v.numerator, v.denominator) for v in map(evaluate, row)] for row in rows]
    return DomainMatrix(entries, (len(rows), width), QQ).rank()


def _symbolic_rank(rows: List[List[Scalar]], width: int) -> int:
    symbols = SymbolTable()
    entries = [[value.to_sympy(symbols) for value in row] for row in rows]
    matrix = DomainMatrix.from_list_sympy(len(rows), width, entries)
    return matrix.to_field().rank()


def rank(vectors: Sequence[Vector]) -> int:
    vectors = [vec for vec in vectors if vec]
    if not vectors:
        return 0
    keys, rows = coordinates(vectors)
    full = min(len(rows), len(keys))
    probe = _probe_rank(rows, len(keys))
    if probe == full:
        return probe
    return _symbolic_rank(rows, len(keys))


def kernel_dimension(columns: Sequence[Vector]) -> int:
    """dim of {c : sum c_i v_i = 0} for the given column images."""
    return len(columns) - rank(columns)


def independent(vectors: Sequence[Vector]) -> bool:
    return rank(vectors) == len(vectors)


def in_span(vector: Vector, basis: Sequence[Vector]) -> bool:
    if not vector:
        return True
    return rank(list(basis) + [vector]) == rank(basis)
