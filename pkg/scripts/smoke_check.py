#!/usr/bin/env python3
"""
Smoke check for the qbundle engine.
Builds the small algebras, replays the fixture corpus and runs the quick suites at n = 2.
"""

import asyncio
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.services.algebra.rewrite import check_confluence
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build, describe
from app.services.verification.fixture_store import FixtureStore
from app.services.verification.suite_config import get_enabled_suites, validate_suite_configs
from app.services.verification.suites import SuiteRunner
from app.utils.logging.logger import verification_metrics
from config import settings

QUICK_SUITES = ["det", "factorization", "localization", "classical"]


def check_configuration():
    """Validate the suite registry."""
    print("\n🔍 Checking suite configuration...")

    validation = validate_suite_configs()

    if validation["errors"]:
        print("❌ Configuration errors found:")
        for error in validation["errors"]:
            print(f"  - {error}")
    else:
        print("✅ No configuration errors found")

    if validation["warnings"]:
        print("⚠️  Configuration warnings:")
        for warning in validation["warnings"]:
            print(f"  - {warning}")

    print("📊 Configuration summary:")
    print(f"  - Total suites: {validation['total_suites']}")
    print(f"  - Enabled suites: {validation['enabled_suites']}")
    print(f"  - Modules: {validation['modules']}")
    print(f"  - Reduction budget: {settings.engine.reduction_budget}")

    return len(validation["errors"]) == 0


def check_builds():
    """Build every n = 2 algebra and confirm its rule system is confluent at low degree."""
    print("\n🔍 Building the n = 2 algebras...")

    ok = True
    for family in AlgebraFamily:
        try:
            alg = build(AlgebraSpec(family, 2))
            summary = describe(alg)
            confluent = check_confluence(alg.presentation, 4).passed
            mark = "✅" if confluent else "❌"
            print(f"  {mark} {alg.name}: {summary['rules']} rules, {summary['hopf']}")
            ok = ok and confluent
        except Exception as e:
            print(f"  ❌ {family.value}2: {str(e)}")
            ok = False
    return ok


def check_fixtures():
    """Replay the regression corpus."""
    print("\n🔍 Replaying fixtures...")

    store = FixtureStore()
    fixtures = store.load_all()
    verdict = store.verify(fixtures)
    if verdict.passed:
        print(f"✅ {len(fixtures)} fixtures reduce to their recorded normal forms")
    else:
        print(f"❌ Fixture mismatch: {verdict.witness}")
    return verdict.passed


async def check_quick_suites():
    """Run the quick suites at n = 2."""
    print("\n🔍 Running quick suites at n = 2...")

    enabled = {suite.name for suite in get_enabled_suites()}
    runner = SuiteRunner(n=2, degree=4)
    results = {}
    for name in QUICK_SUITES:
        if name not in enabled:
            continue
        try:
            report = await runner.run(name)
            counts = report.counts()
            mark = "✅" if report.passed else "❌"
            print(f"  {mark} {name}: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
            results[name] = report.passed
        except Exception as e:
            print(f"  ❌ {name}: {str(e)}")
            results[name] = False
    return all(results.values())


async def main():
    """Run all smoke checks."""
    print("🧪 qbundle smoke check")
    print("=" * 50)

    results = {
        "configuration": check_configuration(),
        "builds": check_builds(),
        "fixtures": check_fixtures(),
        "quick_suites": await check_quick_suites(),
    }

    print("\n" + "=" * 50)
    print("📊 Smoke Check Summary:")
    print("=" * 50)

    for name, result in results.items():
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{name.replace('_', ' ').title()}: {status}")

    print("\n📈 Suite metrics:")
    for name in QUICK_SUITES:
        summary = verification_metrics.get_suite_summary(name)
        if summary:
            print(f"  {name}: {summary}")

    passed = sum(results.values())
    print(f"\nOverall: {passed}/{len(results)} checks passed")
    return passed == len(results)


if __name__ == "__main__":
    success = asyncio.run(main())
    sys.exit(0 if success else 1)
