"""
Exception hierarchy for the qbundle engine.
Report-only operations never raise for failed checks; these signal misuse or engine limits.
"""

from typing import Optional


class QBundleError(Exception):
    """Base class for every engine error."""


class NonInvertibleScalarError(QBundleError):
    def __init__(self, detail: str = ""):
        message = "non-invertible scalar"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class SpecializationError(QBundleError):
    pass


class GrammarError(QBundleError):
    """Parse failure; `position` is a 0-based character offset when known."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class PresentationError(QBundleError):
    pass


class ReductionBudgetExceeded(QBundleError):
    def __init__(self, budget: int, presentation: str = ""):
        self.budget = budget
        where = f" in {presentation}" if presentation else ""
        super().__init__(f"reduction budget of {budget} rule applications exceeded{where}")


class CompletionError(QBundleError):
    pass


class HopfStructureError(QBundleError):
    pass


class LocalizationError(QBundleError):
    pass


class TensorMismatchError(QBundleError):
    pass
