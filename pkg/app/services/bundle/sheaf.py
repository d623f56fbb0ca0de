"""
Sheaf model of the quantum principal bundle over quantum projective space.

Objects sit on the poset of nonempty subsets I of {1..n} (F(U_I) is the
localization at {d_i : i in I}) plus the global object O_q(SL_n), keyed by the
empty set.  Restrictions are the letter inclusions.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Tuple

from app.services.algebra.checks import Verdict
from app.services.algebra.freealg import A, Letter, NcPoly, TensorPoly, Word, d_inv
from app.services.algebra.linalg import kernel_dimension, rank
from app.services.algebra.rewrite import Presentation, normal_words
from app.services.algebra.sampling import sample
from app.services.quantum.hopf import AlgebraMap
from app.services.quantum.localization import LocalizedAlgebra, coinvariants, local_coaction, localize_named, restriction
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, QuantumAlgebra, build, coaction_pi
from app.utils.errors import LocalizationError
from app.utils.logging.logger import get_logger

log = get_logger(__name__)

Chart = FrozenSet[int]
GLOBAL: Chart = frozenset()


def chart_name(chart: Chart) -> str:
    return "global" if chart == GLOBAL else "U" + "".join(map(str, sorted(chart)))


@dataclass
class SheafModel:
    n: int
    base: QuantumAlgebra
    charts: Dict[Chart, LocalizedAlgebra]
    restrictions: Dict[Tuple[Chart, Chart], AlgebraMap] = field(default_factory=dict)

    def presentation(self, chart: Chart) -> Presentation:
        return self.base.presentation if chart == GLOBAL else self.charts[chart].presentation

    @property
    def poset(self) -> List[Chart]:
        return [GLOBAL] + sorted(self.charts, key=lambda c: (len(c), sorted(c)))

    def pairs(self) -> List[Tuple[Chart, Chart]]:
        return sorted(self.restrictions, key=lambda pair: (chart_name(pair[0]), chart_name(pair[1])))

    def coaction(self, chart: Chart) -> Callable[[Word], TensorPoly]:
        if chart == GLOBAL:
            return lambda word: coaction_pi(NcPoly.word(word), self.n)
        return local_coaction(self.charts[chart]).word

    def describe(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "objects": [chart_name(c) for c in self.poset],
            "restrictions": [f"{chart_name(s)}->{chart_name(t)}" for s, t in self.pairs()],
        }


def build_sheaf(n: int, verify: bool = True) -> SheafModel:
    """Charts for every nonempty I ⊆ {1..n} and a restriction for every inclusion."""
    if n < 2:
        raise LocalizationError(f"sheaf model needs n >= 2, got {n}")
    base = build(AlgebraSpec(AlgebraFamily.SLN, n))
    charts = {}
    for size in range(1, n + 1):
        for subset in combinations(range(1, n + 1), size):
            charts[frozenset(subset)] = localize_named(n, subset)
    model = SheafModel(n, base, charts)
    for target in charts:
        model.restrictions[(GLOBAL, target)] = restriction(base.presentation, charts[target])
        for source in charts:
            if source < target:
                model.restrictions[(source, target)] = restriction(charts[source].presentation, charts[target])
    if verify:
        verdict = check_functoriality(model)
        if not verdict.passed:
            raise LocalizationError(f"restrictions are not functorial: {verdict.witness}")
    log.info(f"sheaf model n={n}: {len(charts)} charts, {len(model.restrictions)} restrictions")
    return model


@lru_cache(maxsize=None)
def sheaf_model(n: int) -> SheafModel:
    return build_sheaf(n)


def check_functoriality(model: SheafModel) -> Verdict:
    """r_JK∘r_IJ = r_IK on generators for every chain I ⊆ J ⊆ K."""
    verdict = Verdict("restrictions compose")
    for (first, middle), r_first in model.restrictions.items():
        for (middle2, last), r_second in model.restrictions.items():
            if middle2 != middle:
                continue
            direct = model.restrictions[(first, last)]
            for letter in model.presentation(first).generators:
                composed = r_second(r_first.apply_word((letter,)))
                diff = composed - direct.apply_word((letter,))
                verdict.record(model.presentation(last).vanishes(diff), lambda: f"{chart_name(first)}⊆{chart_name(middle)}⊆{chart_name(last)} on {letter.text()}")
    return verdict


def check_comodule_morphisms(model: SheafModel) -> Verdict:
    """δ_J∘r_IJ = (r_IJ⊗id)∘δ_I on generators."""
    verdict = Verdict("restrictions are comodule algebra maps")
    for (source, target), r in model.restrictions.items():
        delta_source, delta_target = model.coaction(source), model.coaction(target)
        legs = local_coaction(model.charts[target]).legs
        for letter in model.presentation(source).generators:
            image = r.apply_word((letter,))
            left = TensorPoly(legs)
            for word, coef in image.terms.items():
                left = left + delta_target(word).scale(coef)
            right = delta_source((letter,)).map_legs(legs, [r.apply_word, None]).reduced()
            diff = left - right
            verdict.record(diff.vanishes(), lambda: f"{chart_name(source)}->{chart_name(target)} on {letter.text()}: {diff}")
    return verdict


def check_injectivity(model: SheafModel, degree: int) -> Verdict:
    """Restrictions keep normal words up to `degree` linearly independent."""
    verdict = Verdict(f"restrictions are injective up to degree {degree}")
    for (source, target), r in model.restrictions.items():
        words = sample(normal_words(model.presentation(source), degree))
        images = model.presentation(target).cleared_vectors([r.apply_word(word) for word in words])
        found = rank(images)
        verdict.record(found == len(words), lambda: f"{chart_name(source)}->{chart_name(target)}: rank {found} < {len(words)}")
    return verdict


def check_coinvariant_subsheaf(model: SheafModel, length: int) -> Verdict:
    """On each chart U_i the coinvariants are generated by d_j d_i^-1."""
    verdict = Verdict(f"coinvariant subsheaf is generated by d_j d_i^-1 (length <= {length})")
    for i in range(1, model.n + 1):
        chart = coinvariants(model.charts[frozenset({i})], length)
        verdict.merge(chart)
        verdict.details[chart_name(frozenset({i}))] = {
            "kernel": chart.details.get("kernel_dimension"),
            "expected": chart.details.get("expected_dimension"),
        }
    return verdict


# -- global sections ----------------------------------------------------------------


def _window(loc: LocalizedAlgebra, degree: int) -> List[Word]:
    """Normal words d_i^-s·B with s <= 1 and B a base normal word of at most `degree` letters."""
    (i,) = loc.inverted
    d = Letter(A, i, 1)
    words = []
    for body in normal_words(loc.base.presentation, degree):
        words.append(body)
        if d not in body:
            words.append((d_inv(i),) + body)
    return words


def global_sections_pullback(degree: int, n: int = 2) -> Verdict:
    """O_q(SL_2) up to `degree` is the equalizer of F(U_1) × F(U_2) ⇉ F(U_12)."""
    if n != 2:
        raise LocalizationError("the global sections pullback is implemented for n = 2")
    model = sheaf_model(n)
    u1, u2, u12 = frozenset({1}), frozenset({2}), frozenset({1, 2})
    verdict = Verdict(f"global sections of degree <= {degree} are the pullback over U12")

    global_words = normal_words(model.base.presentation, degree)
    pairs = []
    for word in global_words:
        image = {}
        for side, chart in (("1", u1), ("2", u2)):
            for w, c in model.restrictions[(GLOBAL, chart)].apply_word(word).terms.items():
                image[(side, w)] = c
        pairs.append(image)
    injective = rank(pairs)
    verdict.record(injective == len(global_words), lambda: f"global map has rank {injective} < {len(global_words)}")

    r1, r2 = model.restrictions[(u1, u12)], model.restrictions[(u2, u12)]
    window1, window2 = _window(model.charts[u1], degree), _window(model.charts[u2], degree)
    images = [r1.apply_word(word) for word in window1] + [r2.apply_word(word).scale(-1) for word in window2]
    columns = model.presentation(u12).cleared_vectors(images)
    # window words can be dependent in their chart; those relations are not sections
    relations = sum(
        len(window) - rank(model.presentation(chart).cleared_vectors([NcPoly.word(word) for word in window]))
        for chart, window in ((u1, window1), (u2, window2))
    )
    equalizer = kernel_dimension(columns) - relations
    verdict.record(equalizer == len(global_words), lambda: f"equalizer dimension {equalizer} != {len(global_words)}")
    verdict.details.update(global_dimension=len(global_words), equalizer_dimension=equalizer)
    log.debug(f"pullback D={degree}: global {len(global_words)}, equalizer {equalizer}")
    return verdict
