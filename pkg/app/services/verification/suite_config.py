"""
Suite configuration for the qbundle verification runs.
Defines the registered suites with their modules and default parameters.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class SuiteConfig:
    """Configuration for a single verification suite."""

    name: str
    description: str
    modules: List[str]
    enabled: bool = True
    sizes: List[int] = field(default_factory=lambda: [2])
    heavy: bool = False
    per_chart: bool = False
    parameters: Dict[str, Any] = field(default_factory=dict)


VERIFICATION_SUITES = [
    SuiteConfig(
        name="confluence",
        description="Local confluence of every presentation up to the degree bound",
        modules=["rewrite", "qgroups", "twist"],
        sizes=[2, 3, 4],
    ),
    SuiteConfig(
        name="hopf",
        description="Coassociativity, counit and antipode axioms; torus projections are Hopf maps",
        modules=["qgroups"],
        sizes=[2, 3],
    ),
    SuiteConfig(
        name="det",
        description="det_q central and group-like, permutation-sum forms, Laplace expansions, minor coproduct",
        modules=["qgroups"],
        sizes=[2, 3],
    ),
    SuiteConfig(
        name="factorization",
        description="det_q of the factorized matrix equals det_q(a) in O_q(M_n)[d_1^-1]",
        modules=["bundle"],
        sizes=[2, 3],
    ),
    SuiteConfig(
        name="cleaving",
        description="Cleaving maps j_k: relations, comodule property, convolution inverse, trivialization",
        modules=["bundle", "localization"],
        sizes=[2, 3],
        heavy=True,
        per_chart=True,
        parameters={"trivialization_degree": 3},
    ),
    SuiteConfig(
        name="canonical",
        description="The cleft inverse is a one-sided section of the canonical map on each chart",
        modules=["bundle"],
        sizes=[2, 3],
        heavy=True,
        per_chart=True,
        parameters={"degree": 2},
    ),
    SuiteConfig(
        name="coinvariants",
        description="Degree-zero coinvariants on each chart are spanned by monomials in d_j d_i^-1",
        modules=["localization"],
        sizes=[2, 3],
        heavy=True,
        parameters={"length": {2: 4, 3: 3}},
    ),
    SuiteConfig(
        name="sheaf",
        description="Functoriality, comodule restrictions, order independence and the global pullback",
        modules=["bundle", "localization"],
        sizes=[2, 3],
        heavy=True,
        parameters={"pullback_degree": 3},
    ),
    SuiteConfig(
        name="grassmannian",
        description="Semi-coinvariance of r x r minors under the block parabolic projection",
        modules=["qgroups"],
        parameters={"pairs": [(2, 1), (3, 1), (3, 2), (4, 2)]},
    ),
    SuiteConfig(
        name="twist",
        description="Multiparametric algebras and the twisted bundle",
        modules=["twist"],
        sizes=[2, 3],
        heavy=True,
    ),
    SuiteConfig(
        name="classical",
        description="Commutativity at q = 1, g = 1 and the classical coaction values",
        modules=["coeff", "qgroups", "localization"],
        sizes=[2, 3],
    ),
    SuiteConfig(
        name="negative",
        description="Corrupted cleaving images and Manin coefficients must fail",
        modules=["bundle", "rewrite"],
        sizes=[2, 3],
        heavy=True,
    ),
    SuiteConfig(
        name="localization",
        description="Push-left rules, grading, coaction and smash-product witness on every chart",
        modules=["localization", "bundle"],
        sizes=[2, 3],
    ),
    SuiteConfig(
        name="fixtures",
        description="Regression corpus of expressions and their recorded normal forms",
        modules=["rewrite", "qgroups", "twist"],
    ),
]


def get_enabled_suites() -> List[SuiteConfig]:
    """Get all enabled suites."""
    return [suite for suite in VERIFICATION_SUITES if suite.enabled]


def get_suite(name: str) -> Optional[SuiteConfig]:
    """Get a specific suite by name."""
    for suite in VERIFICATION_SUITES:
        if suite.name == name:
            return suite
    return None


def get_suite_names() -> List[str]:
    return [suite.name for suite in get_enabled_suites()]


def get_suites_for_module(module: str) -> List[SuiteConfig]:
    """Get suites that exercise the given module."""
    return [suite for suite in get_enabled_suites() if module in suite.modules]


def validate_suite_configs() -> Dict[str, Any]:
    """Validate suite configurations."""
    validation_results = {
        "total_suites": len(VERIFICATION_SUITES),
        "enabled_suites": len(get_enabled_suites()),
        "modules": set(),
        "errors": [],
        "warnings": [],
    }

    names = set()

    for suite in VERIFICATION_SUITES:
        if suite.name in names:
            validation_results["errors"].append(f"Duplicate suite name: {suite.name}")
        else:
            names.add(suite.name)

        validation_results["modules"].update(suite.modules)

        if not suite.sizes or any(n < 2 for n in suite.sizes):
            validation_results["errors"].append(f"Invalid sizes for {suite.name}: {suite.sizes}")

        if suite.heavy and max(suite.sizes) > 3:
            validation_results["warnings"].append(f"{suite.name} is heavy and runs at n > 3")

    validation_results["modules"] = sorted(validation_results["modules"])

    return validation_results


if __name__ == "__main__":
    print("Testing suite configuration...")

    for suite in get_enabled_suites():
        print(f"  - {suite.name}: {suite.description} (n in {suite.sizes})")

    print(f"\nValidation results: {validate_suite_configs()}")
