"""
Verification suites for the qbundle engine.
Wires the module checks into named suites and runs each suite's checks concurrently.
"""

import asyncio
import time
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from app.services.algebra.checks import Verdict
from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import P11_INV, NcPoly, TensorPoly, Word, d_inv
from app.services.algebra.rewrite import Presentation, RewriteRule, check_confluence, normal_words
from app.services.algebra.sampling import sample
from app.services.bundle.cleaving import (
    canonical_map_section,
    check_cocycle_coinvariant,
    check_determinant_factorization,
    cleaving,
    crossed_cocycle,
    smash_product_witness,
    verify_cleaving,
    verify_trivialization,
)
from app.services.bundle.sheaf import (
    check_coinvariant_subsheaf,
    check_comodule_morphisms,
    check_functoriality,
    check_injectivity,
    global_sections_pullback,
    sheaf_model,
)
from app.services.quantum.hopf import (
    HopfStructure,
    check_antipode,
    check_coassociativity,
    check_counit,
    check_hopf_map,
    check_relations_respected,
)
from app.services.quantum.localization import (
    check_coaction,
    check_coaction_grading,
    check_grading,
    check_order_independence,
    check_push_rules,
    check_rewriting_sound,
    coinvariants,
    local_coaction,
    localize_named,
)
from app.services.quantum.qgroups import (
    AlgebraFamily,
    AlgebraSpec,
    QuantumAlgebra,
    build,
    check_det_central,
    check_det_forms,
    check_det_grouplike,
    check_laplace,
    check_minor_coproduct,
    check_quantum_section,
    grassmannian_check,
    matrix_coproduct_table,
    matrix_counit_table,
    projection_pi,
    torus_projection_p,
    torus_projection_sl,
)
from app.services.twist.multiparametric import (
    chart_twist,
    check_associativity,
    check_projective_relation,
    check_twisted_algebra,
    check_twists_commute,
    verify_twist_theorems,
)
from app.services.verification.fixture_store import FixtureStore
from app.services.verification.report import CheckResult, SuiteReport
from app.services.verification.suite_config import SuiteConfig, get_enabled_suites, get_suite
from app.utils.errors import QBundleError, ReductionBudgetExceeded
from app.utils.logging.logger import engine_logger, get_logger, verification_metrics
from config import settings

log = get_logger(__name__)

Outcome = Union[Verdict, Dict[str, Verdict]]
Check = Tuple[str, Callable[[], Outcome]]

# Families the confluence, hopf and twist suites sweep, per matrix size.
SMALL = (2, 3)


def _degree(n: int, degree: Optional[int]) -> int:
    return degree if degree is not None else settings.default_degree(n)


def _alg(family: AlgebraFamily, n: int, twist: bool = False) -> QuantumAlgebra:
    return build(AlgebraSpec(family, n, twist=twist))


# -- check lists per suite ---------------------------------------------------------


def confluence_checks(n: int, degree: int) -> List[Check]:
    families = [AlgebraFamily.MN]
    if n in SMALL:
        families += [AlgebraFamily.SLN, AlgebraFamily.P, AlgebraFamily.TORUS, AlgebraFamily.PROJECTIVE]
    if n == 2:
        families.append(AlgebraFamily.GLN)
    checks: List[Check] = []
    for family in families:
        checks.append((f"{family.value}{n}", lambda f=family: check_confluence(_alg(f, n).presentation, degree).as_verdict()))
        if n in SMALL and family != AlgebraFamily.GLN:
            checks.append((f"{family.value}{n}_twisted", lambda f=family: check_confluence(_alg(f, n, True).presentation, degree).as_verdict()))
    return checks


def _hopf_words(h: HopfStructure, degree: int) -> List[Word]:
    return sample(normal_words(h.algebra, min(degree, 3)), 60)


def _hopf_axioms(h: HopfStructure, degree: int) -> Dict[str, Verdict]:
    words = _hopf_words(h, degree)
    results = {
        "coassociativity": check_coassociativity(h, words),
        "counit": check_counit(h, words),
        "relations": check_relations_respected(h),
    }
    if h.has_antipode:
        results["antipode"] = check_antipode(h, words)
    return results


def hopf_checks(n: int, degree: int) -> List[Check]:
    checks: List[Check] = [(f"mq{n}", lambda: _hopf_axioms(_alg(AlgebraFamily.MN, n).require_hopf(), degree))]
    if n not in SMALL:
        return checks
    for family in (AlgebraFamily.SLN, AlgebraFamily.P, AlgebraFamily.TORUS):
        checks.append((f"{family.value}{n}", lambda f=family: _hopf_axioms(_alg(f, n).require_hopf(), degree)))
    sl = lambda: _alg(AlgebraFamily.SLN, n).require_hopf()
    pq = lambda: _alg(AlgebraFamily.P, n).require_hopf()
    torus = lambda: _alg(AlgebraFamily.TORUS, n).require_hopf()
    checks += [
        (f"pi{n}", lambda: check_hopf_map(projection_pi(n), sl(), pq())),
        (f"pr_sl{n}", lambda: check_hopf_map(torus_projection_sl(n), sl(), torus())),
        (f"pr_p{n}", lambda: check_hopf_map(torus_projection_p(n), pq(), torus())),
    ]
    if n == 2:
        checks.append((f"glq{n}", lambda: _hopf_axioms(_alg(AlgebraFamily.GLN, n).require_hopf(), degree)))
    return checks


def det_checks(n: int, degree: int) -> List[Check]:
    mn = lambda: _alg(AlgebraFamily.MN, n)
    checks: List[Check] = [
        (f"central{n}", lambda: check_det_central(mn())),
        (f"grouplike{n}", lambda: check_det_grouplike(mn())),
        (f"forms{n}", lambda: check_det_forms(mn())),
        (f"laplace{n}", lambda: check_laplace(mn())),
        (f"section{n}", lambda: check_quantum_section(n)),
    ]
    if n >= 3:
        checks.append((f"minor_coproduct{n}", lambda: check_minor_coproduct(mn(), 2)))
    return checks


def factorization_checks(n: int, degree: int) -> List[Check]:
    return [(f"det{n}", lambda: check_determinant_factorization(n))]


def _cocycle_values(n: int, k: int) -> Verdict:
    cm = cleaving(n, k)
    tau = crossed_cocycle(cm)
    verdict = check_cocycle_coinvariant(cm, tau)
    verdict.details["trivial"] = tau.is_trivial()
    return verdict


def _charts(n: int, k: Optional[int]) -> List[int]:
    if k is None:
        return list(range(1, n + 1))
    if not 1 <= k <= n:
        raise QBundleError(f"chart index k must lie in 1..{n}, got {k}")
    return [k]


def cleaving_checks(n: int, degree: int, k: Optional[int] = None) -> List[Check]:
    depth = min(degree, get_suite("cleaving").parameters["trivialization_degree"])
    checks: List[Check] = []
    for chart in _charts(n, k):
        checks += [
            (f"j{chart}.n{n}", lambda c=chart: verify_cleaving(n, c)),
            (f"trivialization{chart}.n{n}", lambda c=chart: verify_trivialization(n, c, depth)),
            (f"tau{chart}.n{n}", lambda c=chart: _cocycle_values(n, c)),
        ]
    return checks


def canonical_checks(n: int, degree: int, k: Optional[int] = None) -> List[Check]:
    depth = get_suite("canonical").parameters["degree"]
    return [(f"chart{chart}.n{n}", lambda c=chart: canonical_map_section(n, c, min(degree, depth))) for chart in _charts(n, k)]


def coinvariant_checks(n: int, degree: int) -> List[Check]:
    length = get_suite("coinvariants").parameters["length"].get(n, min(degree, 3))
    return [(f"chart{i}.n{n}", lambda i=i: coinvariants(localize_named(n, (i,)), length)) for i in range(1, n + 1)]


def sheaf_checks(n: int, degree: int) -> List[Check]:
    depth = min(degree, 3)
    model = lambda: sheaf_model(n)
    checks: List[Check] = [
        (f"functoriality{n}", lambda: check_functoriality(model())),
        (f"comodule{n}", lambda: check_comodule_morphisms(model())),
        (f"injectivity{n}", lambda: check_injectivity(model(), min(depth, 2))),
        (f"subsheaf{n}", lambda: check_coinvariant_subsheaf(model(), 2)),
    ]
    for subset in combinations(range(1, n + 1), 2):
        label = "".join(map(str, subset))
        checks.append((f"order{label}.n{n}", lambda s=subset: check_order_independence(_alg(AlgebraFamily.SLN, n), s, min(depth, 2))))
    if n == 2:
        checks.append(("pullback2", lambda: global_sections_pullback(get_suite("sheaf").parameters["pullback_degree"])))
    return checks


def grassmannian_checks(n: Optional[int], degree: int) -> List[Check]:
    pairs = get_suite("grassmannian").parameters["pairs"] if n is None else [(n, r) for r in range(1, n)]
    return [(f"n{m}r{r}", lambda m=m, r=r: grassmannian_check(m, r)) for m, r in pairs]


def twist_checks(n: int, degree: int) -> List[Check]:
    depth = 3 if n == 2 else 2
    checks: List[Check] = [
        (f"bundle{n}", lambda: verify_twist_theorems(n, depth)),
        (f"projective{n}", lambda: check_projective_relation(n)),
        (f"commute{n}", lambda: check_twists_commute(n, depth)),
        (f"associativity{n}", lambda: check_associativity(chart_twist(n), localize_named(n, (1,)).presentation, depth)),
    ]
    for family in (AlgebraFamily.MN, AlgebraFamily.SLN, AlgebraFamily.P, AlgebraFamily.PROJECTIVE):
        checks.append((f"{family.value}{n}", lambda f=family: check_twisted_algebra(AlgebraSpec(f, n), min(degree, 4))))
    return checks


def commutativity_sweep(pres: Presentation, q_value: Fraction = Fraction(1)) -> Verdict:
    """Every commutator of generators vanishes after q -> q_value, g -> 1."""
    verdict = Verdict(f"{pres.name} is commutative at q = {q_value}, g = 1")
    classical = lambda s: s.specialize(q_value, phases_to_one=True)
    letters = [letter for letter in pres.generators if pres.is_normal((letter,))]
    for index, u in enumerate(letters):
        for v in letters[index + 1:]:
            commutator = pres.clear(NcPoly.word((u, v)) - NcPoly.word((v, u)))
            limit = commutator.map_coefficients(classical)
            verdict.record(limit.is_zero(), lambda: f"[{u.text()}, {v.text()}] -> {pres.format(limit)}")
    return verdict


def classical_coaction(n: int = 2) -> Verdict:
    """On chart U_1: δb = b⊗t^-1 + a⊗p, δa = a⊗t and δ(a^-1) = a^-1⊗t^-1 with t = p[1,1]."""
    loc = localize_named(n, (1,))
    delta = local_coaction(loc)
    pres, target = delta.legs
    a, b = pres.entry(1, 1), pres.entry(1, 2)
    t_, p_ = target.entry(1, 1), target.entry(1, 2)
    t_inv = NcPoly.letter(P11_INV)
    expected = {
        "a": (a, TensorPoly.from_polys(delta.legs, [a, t_])),
        "b": (b, TensorPoly.from_polys(delta.legs, [b, t_inv]) + TensorPoly.from_polys(delta.legs, [a, p_])),
        "a^-1": (NcPoly.letter(d_inv(1)), TensorPoly.from_polys(delta.legs, [NcPoly.letter(d_inv(1)), t_inv])),
    }
    verdict = Verdict("chart U_1 of the n=2 bundle carries the classical coaction values")
    for label, (poly, value) in expected.items():
        diff = delta(poly) - value
        verdict.record(diff.vanishes(), lambda: f"δ({label}) - expected = {diff}")
    return verdict


def classical_checks(n: int, degree: int, q_value: Fraction = Fraction(1)) -> List[Check]:
    families = [AlgebraFamily.MN, AlgebraFamily.SLN, AlgebraFamily.P, AlgebraFamily.TORUS, AlgebraFamily.PROJECTIVE]
    checks: List[Check] = []
    for family in families:
        checks.append((f"{family.value}{n}", lambda f=family: commutativity_sweep(_alg(f, n).presentation, q_value)))
        checks.append((f"{family.value}{n}_twisted", lambda f=family: commutativity_sweep(_alg(f, n, True).presentation, q_value)))
    checks.append((f"chart1.n{n}", lambda: commutativity_sweep(localize_named(n, (1,)).presentation, q_value)))
    if n == 2 and q_value == 1:
        checks.append(("coaction2", classical_coaction))
    return checks


def corrupted_manin(n: int) -> HopfStructure:
    """O_q(M_n) with the first q-commutation coefficient multiplied by q."""
    pres = _alg(AlgebraFamily.MN, n).presentation
    rules = list(pres.rules)
    index = next(i for i, rule in enumerate(rules) if rule.origin == "manin" and len(rule.rhs) == 1)
    rule = rules[index]
    rules[index] = RewriteRule(rule.lhs, rule.rhs.scale(Scalar.q()), rule.origin)
    corrupted = pres.with_rules(rules, f"{pres.name}_corrupted")
    return HopfStructure(corrupted, matrix_coproduct_table(corrupted), matrix_counit_table(corrupted))


def _must_fail(label: str, verdict: Verdict) -> Verdict:
    control = Verdict(f"{label} is detected")
    control.record(not verdict.passed and bool(verdict.witness), lambda: f"{verdict.statement} passed unexpectedly")
    control.details["witness"] = verdict.witness
    return control


def negative_checks(n: int, degree: int) -> List[Check]:
    return [
        (f"cleaving{n}", lambda: _must_fail(f"corrupted j_{n} image (n={n})", verify_cleaving(n, n, corrupt=True)["relations"])),
        (f"manin{n}", lambda: _must_fail(f"corrupted Manin coefficient (n={n})", check_relations_respected(corrupted_manin(n)))),
    ]


def _smash_witness(n: int) -> Verdict:
    witness = smash_product_witness(cleaving(n, 1))
    verdict = Verdict(f"j_1 does not commute with the coinvariants (n={n})")
    verdict.record(witness is not None, lambda: "every j(h) commutes with every d_j d_1^-1")
    verdict.details["witness"] = witness
    return verdict


def localization_checks(n: int, degree: int) -> List[Check]:
    depth = min(degree, 3)
    checks: List[Check] = []
    for i in range(1, n + 1):
        loc = lambda i=i: localize_named(n, (i,))
        checks += [
            (f"push{i}.n{n}", lambda loc=loc: check_push_rules(loc())),
            (f"grading{i}.n{n}", lambda loc=loc: check_grading(loc(), min(depth, 2))),
            (f"coaction{i}.n{n}", lambda loc=loc: check_coaction(loc())),
            (f"coaction_grading{i}.n{n}", lambda loc=loc: check_coaction_grading(loc(), depth)),
            (f"sound{i}.n{n}", lambda loc=loc: check_rewriting_sound(loc(), depth)),
        ]
    full = tuple(range(1, n + 1))
    checks.append((f"push_all.n{n}", lambda: check_push_rules(localize_named(n, full))))
    checks.append((f"smash{n}", lambda: _smash_witness(n)))
    return checks


def fixture_checks(n: int, degree: int) -> List[Check]:
    return [("corpus", lambda: FixtureStore().verify())]


SUITE_CHECKS: Dict[str, Callable[..., List[Check]]] = {
    "confluence": confluence_checks,
    "hopf": hopf_checks,
    "det": det_checks,
    "factorization": factorization_checks,
    "cleaving": cleaving_checks,
    "canonical": canonical_checks,
    "coinvariants": coinvariant_checks,
    "sheaf": sheaf_checks,
    "grassmannian": grassmannian_checks,
    "twist": twist_checks,
    "classical": classical_checks,
    "negative": negative_checks,
    "localization": localization_checks,
    "fixtures": fixture_checks,
}


# -- runner ------------------------------------------------------------------------


class SuiteRunner:
    """Runs suites; checks of one suite run concurrently in worker threads."""

    def __init__(
        self,
        n: Optional[int] = None,
        degree: Optional[int] = None,
        seed: Optional[int] = None,
        max_workers: Optional[int] = None,
        k: Optional[int] = None,
        q_value: Optional[Fraction] = None,
        heavy: bool = False,
    ):
        self.n = n
        self.heavy = heavy
        self.suite_times: Dict[str, float] = {}
        self.degree = degree
        self.k = k
        self.q_value = q_value
        if seed is not None:
            settings.verify.seed = seed
        self.seed = settings.verify.seed
        self.semaphore = asyncio.Semaphore(max_workers or settings.verify.max_workers)

    def parameters(self) -> Dict[str, object]:
        q = None if self.q_value is None else str(self.q_value)
        return {"n": self.n, "degree": self.degree, "k": self.k, "q": q}

    def checks_for(self, config: SuiteConfig) -> List[Check]:
        builder = SUITE_CHECKS[config.name]
        if config.name == "grassmannian":
            return grassmannian_checks(self.n, self.degree or 0)
        sizes: Sequence[int] = [self.n] if self.n is not None else config.sizes
        if config.heavy and not self.heavy and self.n is None:
            sizes = sizes[:1]
        if config.per_chart and self.k is not None and self.n is None:
            sizes = [n for n in sizes if n >= self.k]
        checks: List[Check] = []
        for n in sizes:
            degree = _degree(n, self.degree)
            if config.per_chart:
                checks.extend(builder(n, degree, self.k))
            elif config.name == "classical":
                checks.extend(builder(n, degree, Fraction(1) if self.q_value is None else self.q_value))
            else:
                checks.extend(builder(n, degree))
        return checks

    async def run_suite(self, name: str) -> SuiteReport:
        config = get_suite(name)
        if config is None or name not in SUITE_CHECKS:
            raise QBundleError(f"unknown suite {name!r}")
        report = SuiteReport(suite=name, parameters=self.parameters(), seed=self.seed)
        for result in await self._run_config(config):
            report.add(result)
        report.suite_times = dict(self.suite_times)
        return report

    async def run_all(self) -> SuiteReport:
        """Every enabled suite, one combined report."""
        report = SuiteReport(suite="all", parameters=self.parameters(), seed=self.seed)
        for config in get_enabled_suites():
            for result in await self._run_config(config):
                report.add(result)
        report.suite_times = dict(self.suite_times)
        return report

    async def run(self, name: str) -> SuiteReport:
        return await (self.run_all() if name == "all" else self.run_suite(name))

    async def _run_config(self, config: SuiteConfig) -> List[CheckResult]:
        engine_logger.log_suite_start(config.name, self.parameters())
        started = time.perf_counter()
        checks = self.checks_for(config)
        batches = await asyncio.gather(*(self._run_check(config.name, check_id, fn) for check_id, fn in checks))
        results = [result for batch in batches for result in batch]

        passed = sum(result.status == "pass" for result in results)
        failed = sum(result.status == "fail" for result in results)
        skipped = len(results) - passed - failed
        elapsed = time.perf_counter() - started
        self.suite_times[config.name] = elapsed
        engine_logger.log_suite_finished(config.name, passed, failed, skipped, elapsed)
        verification_metrics.update_suite_metrics(config.name, passed, failed)
        return results

    async def _run_check(self, suite: str, check_id: str, fn: Callable[[], Outcome]) -> List[CheckResult]:
        full_id = f"{suite}.{check_id}"
        async with self.semaphore:
            started = time.perf_counter()
            try:
                outcome = await asyncio.to_thread(fn)
            except ReductionBudgetExceeded:
                raise
            except Exception as e:
                engine_logger.log_check_error(suite, full_id, e)
                return [CheckResult.from_error(full_id, e, time.perf_counter() - started)]
            elapsed = time.perf_counter() - started

        verdicts = outcome if isinstance(outcome, dict) else {None: outcome}
        results = []
        for key, verdict in verdicts.items():
            result_id = full_id if key is None else f"{full_id}.{key}"
            result = CheckResult.from_verdict(result_id, verdict, elapsed)
            engine_logger.log_check_result(suite, result_id, result.status, result.witness)
            results.append(result)
        return results


# Convenience functions
async def run_suite(
    name: str,
    n: Optional[int] = None,
    degree: Optional[int] = None,
    seed: Optional[int] = None,
    k: Optional[int] = None,
) -> SuiteReport:
    """Run one suite (or `all`) and return its report."""
    runner = SuiteRunner(n=n, degree=degree, seed=seed, k=k)
    return await runner.run(name)


if __name__ == "__main__":
    async def smoke():
        report = await run_suite("det", n=2)
        print(report.to_text())

    asyncio.run(smoke())
