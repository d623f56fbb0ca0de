"""
Suite reports for the qbundle verification runs.
Pydantic models with canonical orjson output and a plain-text rendering.
"""

from typing import Any, Dict, List, Literal, Optional

import orjson
from pydantic import BaseModel, ConfigDict, Field

from app.services.algebra.checks import Verdict

SCHEMA_VERSION = 1
Status = Literal["pass", "fail", "skip"]


class CheckResult(BaseModel):
    """Outcome of a single check inside a suite."""

    id: str
    statement: str
    status: Status
    checked: int = 0
    witness: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    elapsed: Optional[float] = None

    @classmethod
    def from_verdict(cls, check_id: str, verdict: Verdict, elapsed: Optional[float] = None) -> "CheckResult":
        return cls(
            id=check_id,
            statement=verdict.statement,
            status=verdict.status,
            checked=verdict.checked,
            witness=None if verdict.passed else verdict.witness,
            details=_plain(verdict.details),
            elapsed=elapsed,
        )

    @classmethod
    def from_error(cls, check_id: str, error: Exception, elapsed: Optional[float] = None) -> "CheckResult":
        return cls(
            id=check_id,
            statement=f"{check_id} ran to completion",
            status="fail",
            witness=f"{type(error).__name__}: {error}",
            elapsed=elapsed,
        )


class SuiteReport(BaseModel):
    """All checks of one `verify` invocation; `result` is pass iff no check failed."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    suite: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    checks: List[CheckResult] = Field(default_factory=list)
    suite_times: Dict[str, float] = Field(default_factory=dict)

    @property
    def result(self) -> Status:
        return "fail" if any(check.status == "fail" for check in self.checks) else "pass"

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def counts(self) -> Dict[str, int]:
        counts = {"pass": 0, "fail": 0, "skip": 0}
        for check in self.checks:
            counts[check.status] += 1
        return counts

    def add(self, result: CheckResult) -> None:
        self.checks.append(result)

    def sorted(self) -> "SuiteReport":
        return self.model_copy(update={"checks": sorted(self.checks, key=lambda check: check.id)})

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        exclude = None if timings else {"checks": {"__all__": {"elapsed"}}, "suite_times": True}
        data = self.sorted().model_dump(by_alias=True, exclude=exclude)
        data["result"] = self.result
        return data

    def to_json(self, timings: bool = False) -> bytes:
        return orjson.dumps(self.to_dict(timings), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)

    def to_text(self, timings: bool = False) -> str:
        lines = [f"suite {self.suite} (seed {self.seed}) {_format_parameters(self.parameters)}"]
        for check in self.sorted().checks:
            line = f"  [{check.status.upper():4}] {check.id}: {check.statement}"
            if check.checked:
                line += f" ({check.checked} instances)"
            if timings and check.elapsed is not None:
                line += f" {check.elapsed:.2f}s"
            lines.append(line)
            if check.witness:
                lines.append(f"         witness: {check.witness}")
            if check.status == "skip" and "skip_reason" in check.details:
                lines.append(f"         reason: {check.details['skip_reason']}")
        if timings:
            lines += [f"  suite {name}: {seconds:.2f}s" for name, seconds in sorted(self.suite_times.items())]
        counts = self.counts()
        lines.append(f"result: {self.result.upper()} ({counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped)")
        return "\n".join(lines)


def _format_parameters(parameters: Dict[str, Any]) -> str:
    return " ".join(f"{key}={value}" for key, value in sorted(parameters.items()) if value is not None)


def _plain(value: Any) -> Any:
    """Details reduced to JSON-friendly values with deterministic key order."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(item) for item in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
