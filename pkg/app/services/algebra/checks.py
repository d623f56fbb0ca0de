"""
Verdicts returned by report-only operations.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional


@dataclass
class Verdict:
    """Outcome of one mathematical statement checked on many instances."""

    statement: str
    passed: bool = True
    checked: int = 0
    skipped: bool = False
    witness: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, witness: Callable[[], str]) -> bool:
        """Count one instance; the first failure's witness is kept."""
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = witness()
        return ok

    def fail(self, witness: str) -> None:
        self.passed = False
        if self.witness is None:
            self.witness = witness

    def skip(self, reason: str) -> "Verdict":
        self.skipped = True
        self.details["skip_reason"] = reason
        return self

    @property
    def status(self) -> str:
        if self.skipped:
            return "skip"
        return "pass" if self.passed else "fail"

    def merge(self, other: "Verdict") -> "Verdict":
        self.checked += other.checked
        if not other.passed and not other.skipped:
            self.fail(other.witness or other.statement)
        return self
