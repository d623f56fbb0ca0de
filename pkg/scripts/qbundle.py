#!/usr/bin/env python3
"""
Command-line front end for the qbundle engine.
Builds algebras, reduces expressions and runs the verification suites.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 reduction budget exhausted.
"""

import argparse
import asyncio
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.services.algebra.checks import Verdict
from app.services.algebra.freealg import NcPoly
from app.services.quantum.localization import (
    LocalizedAlgebra,
    check_grading,
    check_order_independence,
    check_push_rules,
    coaction_local,
    localize,
)
from app.services.quantum.qgroups import (
    AlgebraFamily,
    AlgebraSpec,
    QuantumAlgebra,
    build,
    check_det_forms,
    coaction_pi,
    describe,
    format_rules,
    qdet,
)
from app.services.twist.cocycle import Twist, TwistMode, twisted_product
from app.services.twist.multiparametric import default_cocycle
from app.services.verification.fixture_store import FixtureStore, load_theta
from app.services.verification.report import CheckResult, SuiteReport
from app.services.verification.suite_config import get_suite_names
from app.services.verification.suites import SuiteRunner
from app.utils.errors import PresentationError, QBundleError, ReductionBudgetExceeded
from app.utils.logging.logger import engine_logger
from config import settings

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class CommandResult:
    """One report plus the plain-text lines printed in text mode."""

    def __init__(self, report: SuiteReport, lines: Optional[List[str]] = None):
        self.report = report
        self.lines = lines


# -- argument types ----------------------------------------------------------------


def index_list(text: str) -> Tuple[int, ...]:
    try:
        indices = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}")
    if not indices:
        raise argparse.ArgumentTypeError("expected at least one index")
    return indices


def q_value(text: str) -> Optional[Fraction]:
    """`q` keeps the parameter symbolic; a rational specializes it."""
    if text == "q":
        return None
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"--q expects 'q' or a rational number, got {text!r}")
    if value == 0:
        raise argparse.ArgumentTypeError("--q must be nonzero")
    return value


def common_options(n_default: Optional[int] = 2) -> argparse.ArgumentParser:
    """Options shared by every command; a fresh parser per command keeps defaults independent."""
    common = argparse.ArgumentParser(add_help=False)
    n_help = "Matrix size n (default: 2)" if n_default is not None else "Matrix size n (default: every size the suite lists)"
    common.add_argument("--n", type=int, default=n_default, help=n_help)
    common.add_argument("--degree", type=int, default=None, help="Degree bound (default: per-n setting)")
    common.add_argument("--q", type=q_value, default=None, dest="q_value", help="'q' (symbolic) or a nonzero rational")
    common.add_argument("--format", choices=["json", "text"], default="text", help="Output format")
    common.add_argument("--seed", type=int, default=None, help="Sampling seed (default: 0)")
    common.add_argument("--budget", type=int, default=None, help="Rule applications per normal-form call")
    common.add_argument("--timings", action="store_true", help="Include elapsed times in the report")
    common.add_argument("--save", action="store_true", help="Also write the JSON report to the reports dir")
    return common


def family_options(default: AlgebraFamily = AlgebraFamily.MN) -> argparse.ArgumentParser:
    family = argparse.ArgumentParser(add_help=False)
    family.add_argument(
        "--family",
        choices=[f.value for f in AlgebraFamily],
        default=default.value,
        help=f"Algebra family (default: {default.value})",
    )
    family.add_argument("--r", type=int, default=None, help="Block size of the parabolic quotient of O_q(M_n)")
    family.add_argument("--twist", action="store_true", help="Use the multiparametric (twisted) algebra")
    return family


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact computations with quantum principal bundles over quantum projective space")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("build", parents=[common_options(), family_options()], help="Build an algebra and describe its presentation")

    nf = commands.add_parser("nf", parents=[common_options(), family_options()], help="Normal form of an expression")
    nf.add_argument("expression")
    nf.add_argument("--invert", type=index_list, default=None, help="Reduce in the localization at d_i for these i")

    commands.add_parser("det", parents=[common_options(), family_options()], help="Quantum determinant and its permutation-sum forms")

    coact = commands.add_parser("coact", parents=[common_options()], help="Coaction of O_q(P) on an expression")
    coact.add_argument("expression")
    coact.add_argument("--invert", type=index_list, default=None, help="Chart: coact in the localization at d_i")

    loc = commands.add_parser("localize", parents=[common_options()], help="Localize O_q(SL_n) at quantum minors")
    loc.add_argument("--invert", type=index_list, required=True, help="Indices i of the inverted d_i, e.g. 1,3")
    loc.add_argument("--check-order", action="store_true", help="Check every build order gives the same normal forms")
    loc.add_argument("--base", choices=[AlgebraFamily.SLN.value, AlgebraFamily.MN.value], default=AlgebraFamily.SLN.value)

    verify = commands.add_parser("verify", parents=[common_options(n_default=None)], help="Run a verification suite")
    verify.add_argument("suite", choices=["all"] + get_suite_names())
    verify.add_argument("--k", type=int, default=None, help="Restrict chart suites to chart U_k")
    verify.add_argument("--heavy", action="store_true", help="Run heavy suites at every size they list, not only the smallest")

    twist = commands.add_parser(
        "twist-product", parents=[common_options(), family_options(AlgebraFamily.SLN)], help="Twisted product of two expressions"
    )
    twist.add_argument("left")
    twist.add_argument("right")
    twist.add_argument("--mode", choices=[m.value for m in TwistMode], default=TwistMode.BOTH.value)
    twist.add_argument("--theta-file", default=None, help="Exponent file: 'j k m' replaces g[j,k] by g[j,k]^m")

    return parser


# -- commands ----------------------------------------------------------------------


def specialized(poly: NcPoly, value: Optional[Fraction]) -> NcPoly:
    if value is None:
        return poly
    return poly.map_coefficients(lambda s: s.specialize(value))


def algebra_from_args(args) -> QuantumAlgebra:
    return build(AlgebraSpec(AlgebraFamily(args.family), args.n, args.r, args.twist))


def parameters_from_args(args, *names: str) -> Dict[str, object]:
    values = {"n": args.n, "degree": args.degree, "q": None if args.q_value is None else str(args.q_value)}
    for name in names:
        values[name] = getattr(args, name, None)
    return values


def computation(command: str, args, details: Dict[str, object], statement: str, *names: str) -> SuiteReport:
    report = SuiteReport(suite=command, parameters=parameters_from_args(args, *names), seed=settings.verify.seed)
    report.add(CheckResult(id=f"{command}.result", statement=statement, status="pass", details=details))
    return report


def add_verdicts(report: SuiteReport, verdicts: Dict[str, Verdict]) -> None:
    for key, verdict in verdicts.items():
        report.add(CheckResult.from_verdict(f"{report.suite}.{key}", verdict))


def cmd_build(args) -> CommandResult:
    alg = algebra_from_args(args)
    summary = describe(alg)
    report = computation("build", args, summary, f"{alg.name} is built and complete to degree {alg.presentation.degree_cap}", "family", "r", "twist")
    lines = [f"{alg.name}: {len(alg.presentation.generators)} generators, {summary['rules']} rules ({summary['hopf']})"]
    lines.append("generators: " + " ".join(summary["generators"]))
    lines += [f"  {rule}" for rule in format_rules(alg.presentation)]
    return CommandResult(report, lines)


def cmd_nf(args) -> CommandResult:
    target = algebra_from_args(args)
    if args.invert:
        target = localize(target, args.invert)
    result = specialized(target.normal_form(target.parse(args.expression)), args.q_value)
    text = target.format(result)
    details = {"algebra": target.name, "expression": args.expression, "normal_form": text}
    report = computation("nf", args, details, f"normal form in {target.name}", "family", "twist", "invert")
    return CommandResult(report, [text])


def cmd_det(args) -> CommandResult:
    alg = algebra_from_args(args)
    if not alg.presentation.matrix_entries:
        raise PresentationError(f"{alg.name} has no matrix entries")
    det = specialized(alg.presentation.reduce(qdet(alg.presentation)), args.q_value)
    text = alg.format(det)
    report = computation("det", args, {"algebra": alg.name, "det": text}, f"det_q of {alg.name}", "family", "twist")
    add_verdicts(report, {"forms": check_det_forms(alg)})
    return CommandResult(report, [text])


def cmd_coact(args) -> CommandResult:
    if args.invert:
        loc = localize(build(AlgebraSpec(AlgebraFamily.SLN, args.n)), args.invert)
        poly = loc.normal_form(loc.parse(args.expression))
        value, source = coaction_local(loc, poly), loc.name
    else:
        alg = build(AlgebraSpec(AlgebraFamily.SLN, args.n))
        value, source = coaction_pi(alg.normal_form(alg.parse(args.expression)), args.n), alg.name
    text = str(value)
    details = {"algebra": source, "expression": args.expression, "coaction": text}
    report = computation("coact", args, details, f"(id ⊗ π)Δ on {source}", "invert")
    return CommandResult(report, [text])


def localization_verdicts(loc: LocalizedAlgebra, args, degree: int) -> Dict[str, Verdict]:
    verdicts = {"push_rules": check_push_rules(loc), "grading": check_grading(loc, min(degree, 3))}
    if args.check_order:
        verdicts["order"] = check_order_independence(loc.base, args.invert, min(degree, 3))
    return verdicts


def cmd_localize(args) -> CommandResult:
    base = build(AlgebraSpec(AlgebraFamily(args.base), args.n))
    loc = localize(base, args.invert)
    degree = args.degree if args.degree is not None else settings.default_degree(args.n)
    rules = [str(rule) for rule in loc.push_rules]
    details = {"algebra": loc.name, "generators": [letter.text() for letter in loc.presentation.generators], "push_rules": rules}
    report = computation("localize", args, details, f"{loc.name} is built", "invert", "check_order")
    add_verdicts(report, localization_verdicts(loc, args, degree))
    lines = [f"{loc.name}: inverted d[i] for i in {list(loc.inverted)}"] + [f"  {rule}" for rule in rules]
    return CommandResult(report, lines)


def cmd_twist_product(args) -> CommandResult:
    family = AlgebraFamily(args.family)
    alg = build(AlgebraSpec(family, args.n, args.r))
    cocycle = default_cocycle(family, args.n)
    if args.theta_file:
        cocycle = cocycle.substituted(load_theta(args.theta_file))
    twist = Twist.from_cocycle(cocycle, TwistMode(args.mode))
    left, right = alg.normal_form(alg.parse(args.left)), alg.normal_form(alg.parse(args.right))
    product = specialized(twisted_product(twist, left, right, alg.presentation), args.q_value)
    text = alg.format(product)
    details = {"algebra": alg.name, "cocycle": cocycle.label, "product": text}
    report = computation("twist-product", args, details, f"twisted product in {alg.name}", "family", "mode", "theta_file")
    return CommandResult(report, [text])


COMMANDS: Dict[str, Callable] = {
    "build": cmd_build,
    "nf": cmd_nf,
    "det": cmd_det,
    "coact": cmd_coact,
    "localize": cmd_localize,
    "twist-product": cmd_twist_product,
}


async def cmd_verify(args) -> CommandResult:
    runner = SuiteRunner(n=args.n, degree=args.degree, seed=args.seed, k=args.k, q_value=args.q_value, heavy=args.heavy)
    report = await runner.run(args.suite)
    return CommandResult(report)


# -- output ------------------------------------------------------------------------


def emit(result: CommandResult, args) -> None:
    report = result.report
    if args.format == "json":
        sys.stdout.write(report.to_json(args.timings).decode("utf-8") + "\n")
        return
    if result.lines is None:
        print(f"🔬 qbundle verify {report.suite}")
        print("=" * 60)
        print(report.to_text(args.timings))
        print()
        print("✅ All checks passed" if report.passed else "❌ Some checks failed")
        return
    for line in result.lines:
        print(line)
    for check in report.sorted().checks:
        if check.status == "fail":
            print(f"❌ {check.id}: {check.statement}; witness: {check.witness}")


async def main(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run one command and return its exit code."""
    args = build_parser().parse_args(argv)

    if args.budget is not None:
        if args.budget <= 0:
            print("usage error: --budget must be positive", file=sys.stderr)
            return EXIT_USAGE
        settings.engine.reduction_budget = args.budget
    if args.seed is not None:
        settings.verify.seed = args.seed

    try:
        if args.command == "verify":
            result = await cmd_verify(args)
        else:
            result = COMMANDS[args.command](args)
    except ReductionBudgetExceeded as e:
        engine_logger.log_budget_exhausted(args.command, e.budget)
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except QBundleError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(result, args)
    if args.save:
        path = FixtureStore().save_report(result.report, args.timings)
        print(f"report saved to {path}", file=sys.stderr)
    return EXIT_OK if result.report.passed else EXIT_FAILED


if __name__ == "__main__":
    exit_code = asyncio.run(main())
    sys.exit(exit_code)
