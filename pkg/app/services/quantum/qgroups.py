"""
Builders for the quantum coordinate rings and their structure maps.

Families: O_q(M_n), O_q(GL_n), O_q(SL_n), the maximal parabolic O_q(P), the
torus O(T^{n-1}), the quantum projective ring and, for Grassmannian checks, the
block-parabolic quotient of O_q(M_n).  Matrix entries are ordered row-major and
every Manin relation is oriented with the out-of-order product as lhs, so
irreducible words are ordered monomials.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import LAMBDA, Scalar
from app.services.algebra.freealg import (
    A,
    DET_INV,
    P,
    P11_INV,
    Letter,
    NcPoly,
    TensorPoly,
    format_word,
    t,
    t_inv,
    x,
)
from app.services.algebra.rewrite import Presentation, RewriteRule, complete, orient
from app.services.quantum.hopf import AlgebraMap, HopfStructure, check_antipode, map_leg
from app.utils.errors import HopfStructureError, PresentationError
from app.utils.logging.logger import engine_logger, get_logger
from config import settings

log = get_logger(__name__)


class AlgebraFamily(str, Enum):
    MN = "mq"
    GLN = "glq"
    SLN = "slq"
    P = "pq"
    TORUS = "torus"
    PROJECTIVE = "projq"


@dataclass(frozen=True)
class AlgebraSpec:
    family: AlgebraFamily
    n: int
    r: Optional[int] = None
    twist: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise PresentationError(f"invalid spec: n must be at least 2, got {self.n}")
        if self.r is not None and not 1 <= self.r < self.n:
            raise PresentationError(f"invalid spec: r must lie in 1..{self.n - 1}, got {self.r}")

    @property
    def name(self) -> str:
        base = f"{self.family.value}{self.n}"
        if self.r is not None:
            base = f"{base}r{self.r}"
        return f"{base}_twisted" if self.twist else base


@dataclass
class QuantumAlgebra:
    """A built presentation together with its Hopf structure, if any."""

    spec: AlgebraSpec
    presentation: Presentation
    hopf: Optional[HopfStructure] = None

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def n(self) -> int:
        return self.spec.n

    def parse(self, text: str) -> NcPoly:
        return self.presentation.parse(text)

    def normal_form(self, poly: NcPoly) -> NcPoly:
        return self.presentation.normal_form(poly)

    def format(self, poly: NcPoly) -> str:
        return self.presentation.format(poly)

    def require_hopf(self) -> HopfStructure:
        if self.hopf is None:
            raise HopfStructureError(f"{self.name} carries no Hopf structure")
        return self.hopf


# -- matrix combinatorics ----------------------------------------------------


def matrix_entries(n: int, family: str = A, keep: Callable[[int, int], bool] = lambda i, j: True) -> Dict[Tuple[int, int], Letter]:
    return {(i, j): Letter(family, i, j) for i in range(1, n + 1) for j in range(1, n + 1) if keep(i, j)}


def manin_rules(entries: Dict[Tuple[int, int], Letter]) -> List[RewriteRule]:
    """Manin relations among the given entries; absent entries are zero."""
    positions = sorted(entries)
    rules = []
    for index, (i, j) in enumerate(positions):
        u = entries[(i, j)]
        for k, l in positions[index + 1:]:
            v = entries[(k, l)]
            if i == k or j == l:
                rhs = NcPoly.word((u, v), Scalar.q())
            elif j > l:
                rhs = NcPoly.word((u, v))
            else:
                rhs = NcPoly.word((u, v))
                if (i, l) in entries and (k, j) in entries:
                    rhs = rhs - NcPoly.word((entries[(i, l)], entries[(k, j)]), LAMBDA)
            rules.append(RewriteRule((v, u), rhs, "manin"))
    return rules


def permutation_length(perm: Sequence[int]) -> int:
    return Permutation(list(perm)).inversions()


def _signed_q(length: int) -> Scalar:
    """(-q)^(-length)."""
    return Scalar.monomial((-1) ** length, -length)


def _check_indices(rows: Sequence[int], cols: Sequence[int], n: int) -> None:
    if len(rows) != len(cols):
        raise PresentationError("ragged minor: row and column index lists differ in length")
    for indices in (rows, cols):
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise PresentationError("minor indices must be strictly increasing")
        if any(not 1 <= index <= n for index in indices):
            raise PresentationError(f"minor index out of range 1..{n}")


def permutation_sum(
    entry: Callable[[int, int], NcPoly], rows: Sequence[int], cols: Sequence[int], by_columns: bool = False
) -> NcPoly:
    """Σ_σ (-q)^(-ℓ(σ)) Π entry(...), factors taken in increasing row (or column) order."""
    total = NcPoly.zero()
    size = len(rows)
    for perm in permutations(range(size)):
        term = NcPoly.constant(_signed_q(permutation_length(perm)))
        for position in range(size):
            if by_columns:
                factor = entry(rows[perm[position]], cols[position])
            else:
                factor = entry(rows[position], cols[perm[position]])
            term = term * factor
            if term.is_zero():
                break
        total = total + term
    return total


def minor_free(pres: Presentation, rows: Sequence[int], cols: Sequence[int], by_columns: bool = False) -> NcPoly:
    """Permutation sum of the minor, unreduced."""
    _check_indices(rows, cols, pres.n)
    return permutation_sum(pres.entry, rows, cols, by_columns)


def qminor(pres: Presentation, rows: Sequence[int], cols: Sequence[int]) -> NcPoly:
    return pres.reduce(minor_free(pres, rows, cols))


def qdet(pres: Presentation) -> NcPoly:
    full = list(range(1, pres.n + 1))
    return qminor(pres, full, full)


def qdet_column_form(pres: Presentation) -> NcPoly:
    full = list(range(1, pres.n + 1))
    return pres.reduce(minor_free(pres, full, full, by_columns=True))


def laplace_first_column(pres: Presentation, rows: Sequence[int], cols: Sequence[int]) -> NcPoly:
    """Σ_r (-q)^(-r) a[rows[r], cols[0]] · minor(rows without r, cols[1:])."""
    _check_indices(rows, cols, pres.n)
    if len(rows) == 1:
        return pres.reduce(pres.entry(rows[0], cols[0]))
    total = NcPoly.zero()
    for position, row in enumerate(rows):
        rest = list(rows[:position]) + list(rows[position + 1:])
        total = total + (pres.entry(row, cols[0]) * minor_free(pres, rest, cols[1:])).scale(_signed_q(position))
    return pres.reduce(total)


def complement(n: int, index: int) -> List[int]:
    return [k for k in range(1, n + 1) if k != index]


def matrix_coproduct_table(pres: Presentation) -> Dict[Letter, TensorPoly]:
    legs = (pres, pres)
    table = {}
    for (i, j), letter in pres.matrix_entries.items():
        total = TensorPoly(legs)
        for k in range(1, pres.n + 1):
            left, right = pres.matrix_entries.get((i, k)), pres.matrix_entries.get((k, j))
            if left is not None and right is not None:
                total = total + TensorPoly(legs, {((left,), (right,)): 1})
        table[letter] = total
    return table


def matrix_counit_table(pres: Presentation) -> Dict[Letter, Scalar]:
    return {letter: Scalar.one() if i == j else Scalar.zero() for (i, j), letter in pres.matrix_entries.items()}


def _verify_antipode(hopf: HopfStructure) -> None:
    verdict = check_antipode(hopf, [(letter,) for letter in hopf.algebra.generators])
    if not verdict.passed:
        raise HopfStructureError(f"{hopf.name}: antipode axiom fails on generators: {verdict.witness}")


def _log_built(pres: Presentation) -> None:
    engine_logger.log_build(pres.name, len(pres.generators), len(pres.rules), pres.rule_counts().get("completion", 0))


# -- builders ---------------------------------------------------------------


def _matrix_presentation(name: str, n: int, family: str, degree_cap: int) -> Presentation:
    entries = matrix_entries(n)
    return Presentation(
        name,
        n,
        [entries[key] for key in sorted(entries)],
        manin_rules(entries),
        degree_cap=degree_cap,
        matrix_entries=entries,
        family=family,
    )


def build_mn(n: int) -> QuantumAlgebra:
    pres = _matrix_presentation(f"mq{n}", n, AlgebraFamily.MN.value, settings.default_degree(n))
    hopf = HopfStructure(pres, matrix_coproduct_table(pres), matrix_counit_table(pres))
    _log_built(pres)
    return QuantumAlgebra(AlgebraSpec(AlgebraFamily.MN, n), pres, hopf)


def _antidiagonal_orientation(base: Presentation, relation: NcPoly) -> RewriteRule:
    return orient(base, relation, "det")


def build_sln(n: int) -> QuantumAlgebra:
    cap = settings.engine.completion_cap(n)
    base = _matrix_presentation(f"slq{n}", n, AlgebraFamily.SLN.value, cap)
    full = list(range(1, n + 1))
    det_rule = _antidiagonal_orientation(base, minor_free(base, full, full) - NcPoly.one())
    pres = complete(base.extended([det_rule]), cap)
    antipode = {
        pres.matrix_entries[(i, j)]: qminor(pres, complement(n, j), complement(n, i)).scale(Scalar.monomial((-1) ** abs(j - i), j - i))
        for (i, j) in pres.matrix_entries
    }
    hopf = HopfStructure(pres, matrix_coproduct_table(pres), matrix_counit_table(pres), antipode)
    _verify_antipode(hopf)
    _log_built(pres)
    return QuantumAlgebra(AlgebraSpec(AlgebraFamily.SLN, n), pres, hopf)


def build_gln(n: int) -> QuantumAlgebra:
    cap = settings.engine.completion_cap(n)
    entries = matrix_entries(n)
    generators = [DET_INV] + [entries[key] for key in sorted(entries)]
    central = [RewriteRule((letter, DET_INV), NcPoly.word((DET_INV, letter)), "central") for letter in generators[1:]]
    base = Presentation(
        f"glq{n}",
        n,
        generators,
        manin_rules(entries) + central,
        degree_cap=cap,
        matrix_entries=entries,
        family=AlgebraFamily.GLN.value,
    )
    full = list(range(1, n + 1))
    det_free = minor_free(base, full, full)
    det_rule = _antidiagonal_orientation(base, NcPoly.letter(DET_INV) * det_free - NcPoly.one())
    pres = complete(base.extended([det_rule]), cap)
    det = pres.reduce(det_free)
    inv = NcPoly.letter(DET_INV)
    antipode = {DET_INV: det}
    for (i, j), letter in entries.items():
        cofactor = qminor(pres, complement(n, j), complement(n, i)).scale(Scalar.monomial((-1) ** abs(j - i), j - i))
        antipode[letter] = pres.reduce(inv * cofactor)
    coproduct = matrix_coproduct_table(pres)
    coproduct[DET_INV] = TensorPoly((pres, pres), {((DET_INV,), (DET_INV,)): 1})
    counit = matrix_counit_table(pres)
    counit[DET_INV] = Scalar.one()
    hopf = HopfStructure(pres, coproduct, counit, antipode)
    _verify_antipode(hopf)
    _log_built(pres)
    return QuantumAlgebra(AlgebraSpec(AlgebraFamily.GLN, n), pres, hopf)


def parabolic_entries(n: int) -> Dict[Tuple[int, int], Letter]:
    """p[i,j] with the entries p[α,1] (α >= 2) removed."""
    return matrix_entries(n, P, keep=lambda i, j: not (i >= 2 and j == 1))


def parabolic_presentation_rules(n: int) -> Tuple[List[Letter], Dict[Tuple[int, int], Letter], List[RewriteRule]]:
    entries = parabolic_entries(n)
    p11 = entries[(1, 1)]
    generators = [P11_INV] + [entries[key] for key in sorted(entries)]
    rules = manin_rules(entries)
    for (i, j), letter in sorted(entries.items()):
        if (i, j) == (1, 1):
            continue
        factor = Scalar.q(-1) if i == 1 else Scalar.one()
        rules.append(RewriteRule((letter, P11_INV), NcPoly.word((P11_INV, letter), factor), "inverse"))
    rules.append(RewriteRule((p11, P11_INV), NcPoly.one(), "inverse"))
    rules.append(RewriteRule((P11_INV, p11), NcPoly.one(), "inverse"))
    return generators, entries, rules


def _excluded_parabolic(n: int, family: str = P) -> Dict[Letter, str]:
    return {Letter(family, alpha, 1): "letter excluded by parabolic ideal" for alpha in range(2, n + 1)}


def build_parabolic(n: int) -> QuantumAlgebra:
    cap = settings.engine.completion_cap(n)
    generators, entries, rules = parabolic_presentation_rules(n)
    base = Presentation(
        f"pq{n}",
        n,
        generators,
        rules,
        degree_cap=cap,
        excluded=_excluded_parabolic(n),
        matrix_entries=entries,
        family=AlgebraFamily.P.value,
    )
    lower = list(range(2, n + 1))
    det_rule = _antidiagonal_orientation(base, minor_free(base, lower, lower) - NcPoly.letter(P11_INV))
    pres = complete(base.extended([det_rule]), cap)

    sl = build(AlgebraSpec(AlgebraFamily.SLN, n))
    pi = _projection(sl.presentation, pres)
    antipode = {letter: pi(sl.hopf.antipode_table[Letter(A, i, j)]) for (i, j), letter in entries.items()}
    antipode[P11_INV] = NcPoly.letter(entries[(1, 1)])
    coproduct = matrix_coproduct_table(pres)
    coproduct[P11_INV] = TensorPoly((pres, pres), {((P11_INV,), (P11_INV,)): 1})
    counit = matrix_counit_table(pres)
    counit[P11_INV] = Scalar.one()
    hopf = HopfStructure(pres, coproduct, counit, antipode)
    _verify_antipode(hopf)
    _log_built(pres)
    return QuantumAlgebra(AlgebraSpec(AlgebraFamily.P, n), pres, hopf)


def build_torus(n: int) -> QuantumAlgebra:
    """O(T^{n-1}): commuting invertible t_i with t_1…t_n = 1 (t_n eliminated)."""
    generators = []
    for i in range(1, n + 1):
        generators += [t_inv(i), t(i)]
    free = [letter for letter in generators if letter.i < n]
    rules = []
    for index, low in enumerate(free):
        for high in free[index + 1:]:
            if high.i == low.i:
                continue
            rules.append(RewriteRule((high, low), NcPoly.word((low, high)), "commute"))
    for i in range(1, n):
        rules.append(RewriteRule((t(i), t_inv(i)), NcPoly.one(), "inverse"))
        rules.append(RewriteRule((t_inv(i), t(i)), NcPoly.one(), "inverse"))
    rules.append(RewriteRule((t(n),), NcPoly.word(tuple(t_inv(i) for i in range(1, n))), "det"))
    rules.append(RewriteRule((t_inv(n),), NcPoly.word(tuple(t(i) for i in range(1, n))), "det"))
    pres = Presentation(
        f"torus{n}",
        n,
        generators,
        rules,
        degree_cap=settings.default_degree(n),
        letter_weights={t(n): n, t_inv(n): n},
        family=AlgebraFamily.TORUS.value,
    )
    legs = (pres, pres)
    coproduct = {letter: TensorPoly(legs, {((letter,), (letter,)): 1}) for letter in generators}
    counit = {letter: Scalar.one() for letter in generators}
    antipode = {letter: NcPoly.letter(t(letter.i) if letter.is_inverse else t_inv(letter.i)) for letter in generators}
    hopf = HopfStructure(pres, coproduct, counit, antipode)
    _verify_antipode(hopf)
    _log_built(pres)
    return QuantumAlgebra(AlgebraSpec(AlgebraFamily.TORUS, n), pres, hopf)


def projective_rules(n: int, coefficient: Callable[[int, int], Scalar]) -> List[RewriteRule]:
    """x_j x_i -> coefficient(i, j) x_i x_j for i < j."""
    return [
        RewriteRule((x(j), x(i)), NcPoly.word((x(i), x(j)), coefficient(i, j)), "projective")
        for i, j in combinations(range(1, n + 1), 2)
    ]


def build_projective(n: int, twisted: bool = False) -> QuantumAlgebra:
    if twisted:
        rules = projective_rules(n, lambda i, j: Scalar.monomial(1, 1, {(i, j): -2}))
    else:
        rules = projective_rules(n, lambda i, j: Scalar.q())
    spec = AlgebraSpec(AlgebraFamily.PROJECTIVE, n, twist=twisted)
    pres = Presentation(
        spec.name,
        n,
        [x(i) for i in range(1, n + 1)],
        rules,
        degree_cap=settings.default_degree(n),
        family=AlgebraFamily.PROJECTIVE.value,
    )
    _log_built(pres)
    return QuantumAlgebra(spec, pres, None)


def build_block_parabolic(n: int, r: int) -> QuantumAlgebra:
    """Quotient of O_q(M_n) by the entries a[i,j] with i > r and j <= r (a bialgebra)."""
    spec = AlgebraSpec(AlgebraFamily.MN, n, r=r)
    entries = matrix_entries(n, P, keep=lambda i, j: not (i > r and j <= r))
    excluded = {
        Letter(P, i, j): "letter excluded by parabolic ideal"
        for i in range(r + 1, n + 1)
        for j in range(1, r + 1)
    }
    pres = Presentation(
        f"parabolic{n}r{r}",
        n,
        [entries[key] for key in sorted(entries)],
        manin_rules(entries),
        degree_cap=settings.default_degree(n),
        excluded=excluded,
        matrix_entries=entries,
        family="parabolic",
    )
    hopf = HopfStructure(pres, matrix_coproduct_table(pres), matrix_counit_table(pres))
    _log_built(pres)
    return QuantumAlgebra(spec, pres, hopf)


@lru_cache(maxsize=None)
def build(spec: AlgebraSpec) -> QuantumAlgebra:
    """Build (and cache) the algebra named by `spec`."""
    if spec.twist:
        from app.services.twist.multiparametric import build_twisted

        return build_twisted(spec)
    if spec.r is not None:
        return build_block_parabolic(spec.n, spec.r)
    builders = {
        AlgebraFamily.MN: build_mn,
        AlgebraFamily.GLN: build_gln,
        AlgebraFamily.SLN: build_sln,
        AlgebraFamily.P: build_parabolic,
        AlgebraFamily.TORUS: build_torus,
        AlgebraFamily.PROJECTIVE: build_projective,
    }
    return builders[spec.family](spec.n)


def build_named(family: str, n: int, r: Optional[int] = None, twist: bool = False) -> QuantumAlgebra:
    return build(AlgebraSpec(AlgebraFamily(family), n, r, twist))


# -- projections and coactions -----------------------------------------------


def _projection(source: Presentation, target: Presentation) -> AlgebraMap:
    return AlgebraMap("π", source, target, lambda letter: target.entry(letter.i, letter.j))


@lru_cache(maxsize=None)
def projection_pi(n: int) -> AlgebraMap:
    """π: O_q(SL_n) -> O_q(P), a[α,1] -> 0 and a[i,j] -> p[i,j] otherwise."""
    sl = build(AlgebraSpec(AlgebraFamily.SLN, n))
    pq = build(AlgebraSpec(AlgebraFamily.P, n))
    return _projection(sl.presentation, pq.presentation)


def project_pi(poly: NcPoly, n: int) -> NcPoly:
    return projection_pi(n)(poly)


def coaction_pi(poly: NcPoly, n: int) -> TensorPoly:
    """(id ⊗ π)∘Δ on O_q(SL_n); legs (O_q(SL_n), O_q(P))."""
    sl = build(AlgebraSpec(AlgebraFamily.SLN, n))
    pi = projection_pi(n)
    return map_leg(sl.hopf.coproduct(poly), 1, pi.apply_word, pi.target)


@lru_cache(maxsize=None)
def torus_projection_sl(n: int) -> AlgebraMap:
    """pr: a[i,j] -> δ_ij t_i."""
    sl = build(AlgebraSpec(AlgebraFamily.SLN, n))
    torus = build(AlgebraSpec(AlgebraFamily.TORUS, n))
    return AlgebraMap(
        "pr",
        sl.presentation,
        torus.presentation,
        lambda letter: NcPoly.letter(t(letter.i)) if letter.i == letter.j else NcPoly.zero(),
    )


@lru_cache(maxsize=None)
def torus_projection_p(n: int) -> AlgebraMap:
    """p: p[i,j] -> δ_ij t_i, p[1,1]^-1 -> t_1^-1."""
    pq = build(AlgebraSpec(AlgebraFamily.P, n))
    torus = build(AlgebraSpec(AlgebraFamily.TORUS, n))

    def image(letter: Letter) -> NcPoly:
        if letter == P11_INV:
            return NcPoly.letter(t_inv(1))
        return NcPoly.letter(t(letter.i)) if letter.i == letter.j else NcPoly.zero()

    return AlgebraMap("p", pq.presentation, torus.presentation, image)


# -- determinant and section checks --------------------------------------------


def check_det_central(alg: QuantumAlgebra) -> Verdict:
    pres = alg.presentation
    verdict = Verdict(f"det_q is central in {pres.name}")
    det = qdet(pres)
    for (i, j) in sorted(pres.matrix_entries):
        entry = pres.entry(i, j)
        diff = pres.reduce(det * entry - entry * det)
        verdict.record(diff.is_zero(), lambda: f"[det, a[{i},{j}]] = {pres.format(diff)}")
    return verdict


def check_det_grouplike(alg: QuantumAlgebra) -> Verdict:
    pres, hopf = alg.presentation, alg.require_hopf()
    verdict = Verdict(f"Δ(det_q) = det_q ⊗ det_q in {pres.name}")
    det = qdet(pres)
    diff = hopf.coproduct(det) - TensorPoly.from_polys(hopf.legs, [det, det])
    verdict.record(diff.is_zero(), lambda: str(diff))
    return verdict


def check_det_forms(alg: QuantumAlgebra) -> Verdict:
    pres = alg.presentation
    verdict = Verdict(f"row and column permutation sums of det_q agree in {pres.name}")
    diff = qdet(pres) - qdet_column_form(pres)
    verdict.record(diff.is_zero(), lambda: pres.format(diff))
    return verdict


def check_laplace(alg: QuantumAlgebra) -> Verdict:
    pres = alg.presentation
    verdict = Verdict(f"first-column quantum Laplace expansion equals det_q in {pres.name}")
    full = list(range(1, pres.n + 1))
    diff = laplace_first_column(pres, full, full) - qdet(pres)
    verdict.record(diff.is_zero(), lambda: pres.format(diff))
    return verdict


def check_minor_coproduct(alg: QuantumAlgebra, size: int = 2) -> Verdict:
    """Δ(D^J_I) = Σ_K D^K_I ⊗ D^J_K for all minors of the given size."""
    pres, hopf = alg.presentation, alg.require_hopf()
    verdict = Verdict(f"minor coproduct formula for {size}x{size} minors in {pres.name}")
    index_sets = list(combinations(range(1, pres.n + 1), size))
    for rows in index_sets:
        for cols in index_sets:
            expected = TensorPoly(hopf.legs)
            for middle in index_sets:
                expected = expected + TensorPoly.from_polys(
                    hopf.legs, [qminor(pres, rows, middle), qminor(pres, middle, cols)]
                )
            diff = hopf.coproduct(qminor(pres, rows, cols)) - expected.reduced()
            verdict.record(diff.is_zero(), lambda: f"rows {rows} cols {cols}: {diff}")
    return verdict


def check_quantum_section(n: int) -> Verdict:
    """(id ⊗ π)Δ(a11) = a11 ⊗ p11."""
    sl = build(AlgebraSpec(AlgebraFamily.SLN, n))
    pq = build(AlgebraSpec(AlgebraFamily.P, n))
    verdict = Verdict("d = a[1,1] is a quantum section")
    a11 = sl.presentation.entry(1, 1)
    expected = TensorPoly.from_polys((sl.presentation, pq.presentation), [a11, pq.presentation.entry(1, 1)])
    diff = coaction_pi(a11, n) - expected
    verdict.record(diff.is_zero(), lambda: str(diff))
    return verdict


def grassmannian_check(n: int, r: int) -> Verdict:
    """(id⊗π_r)Δ(D_I) = D_I ⊗ π_r(D_{1..r}) for every r-subset I of rows (columns 1..r)."""
    if not 1 <= r < n:
        raise PresentationError(f"grassmannian check needs 1 <= r < n, got r={r}, n={n}")
    mn = build(AlgebraSpec(AlgebraFamily.MN, n))
    quotient = build_block_parabolic(n, r)
    pres, target = mn.presentation, quotient.presentation
    pi_r = AlgebraMap("π_r", pres, target, lambda letter: target.entry(letter.i, letter.j))
    cols = list(range(1, r + 1))
    section = pi_r(qminor(pres, cols, cols))
    verdict = Verdict(f"D_I is semi-coinvariant for the ({n},{r}) block parabolic")
    outcomes = {}
    for rows in combinations(range(1, n + 1), r):
        minor = qminor(pres, rows, cols)
        left = map_leg(mn.hopf.coproduct(minor), 1, pi_r.apply_word, target)
        right = TensorPoly.from_polys((pres, target), [minor, section])
        diff = left - right
        ok = verdict.record(diff.is_zero(), lambda: f"I={rows}: {diff}")
        outcomes["".join(map(str, rows))] = "pass" if ok else "fail"
    verdict.details["minors"] = outcomes
    log.debug(f"grassmannian ({n},{r}): {outcomes}")
    return verdict


def describe(alg: QuantumAlgebra) -> Dict[str, object]:
    """Summary used by the CLI `build` command."""
    pres = alg.presentation
    return {
        "name": pres.name,
        "n": pres.n,
        "generators": [letter.text() for letter in pres.generators],
        "rules": len(pres.rules),
        "rule_origins": pres.rule_counts(),
        "degree_cap": pres.degree_cap,
        "hopf": "none" if alg.hopf is None else ("hopf" if alg.hopf.has_antipode else "bialgebra"),
        "sample_rules": [str(rule) for rule in pres.rules[: min(8, len(pres.rules))]],
    }


def format_rules(pres: Presentation) -> List[str]:
    return [f"{format_word(rule.lhs)} -> {pres.format(rule.rhs)}" for rule in pres.rules]
