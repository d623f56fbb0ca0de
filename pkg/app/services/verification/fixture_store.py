"""
Fixture corpus and report storage for the qbundle engine.
Loads `expression => expected` regression fixtures and saves suite reports as JSON.
"""

from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from app.services.algebra.checks import Verdict
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build
from app.services.twist.cocycle import parse_theta
from app.services.verification.report import SuiteReport
from app.utils.errors import PresentationError, QBundleError
from app.utils.logging.logger import engine_logger, get_logger
from config import settings

log = get_logger(__name__)


@dataclass
class Fixture:
    """One regression line: `expression` reduces to `expected` in the named algebra."""

    source: str
    line: int
    spec: AlgebraSpec
    expression: str
    expected: str

    @property
    def label(self) -> str:
        return f"{self.source}:{self.line}"


def _parse_header(line: str, source: str, number: int) -> AlgebraSpec:
    parts = line.split()
    if len(parts) not in (3, 4) or parts[0] != "@algebra":
        raise PresentationError(f"{source}:{number}: expected '@algebra <family> <n> [twisted]'")
    try:
        family, n = AlgebraFamily(parts[1]), int(parts[2])
    except ValueError:
        raise PresentationError(f"{source}:{number}: unknown algebra header {line!r}")
    twisted = len(parts) == 4 and parts[3] == "twisted"
    return AlgebraSpec(family, n, twist=twisted)


def parse_fixtures(lines: Iterable[str], source: str = "<fixtures>") -> List[Fixture]:
    """`@algebra slq 2` headers select the algebra; `#` starts a comment."""
    fixtures = []
    spec: Optional[AlgebraSpec] = None
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            spec = _parse_header(line, source, number)
            continue
        if "=>" not in line:
            raise PresentationError(f"{source}:{number}: expected 'expression => normal form'")
        if spec is None:
            raise PresentationError(f"{source}:{number}: fixture before any @algebra header")
        expression, expected = (part.strip() for part in line.split("=>", 1))
        fixtures.append(Fixture(source, number, spec, expression, expected))
    return fixtures


def check_fixture(fixture: Fixture) -> Tuple[bool, str]:
    """(ok, formatted normal form); the expected side must already be written in normal words."""
    alg = build(fixture.spec)
    found = alg.normal_form(alg.parse(fixture.expression))
    expected = alg.parse(fixture.expected)
    return found == expected, alg.format(found)


class FixtureStore:
    """Fixture files under the fixtures dir, reports under the reports dir."""

    def __init__(self, fixtures_dir: Optional[str] = None, reports_dir: Optional[str] = None):
        self.fixtures_dir = Path(fixtures_dir or settings.storage.fixtures_dir)
        self.reports_dir = Path(reports_dir or settings.storage.reports_dir)

    def fixture_files(self) -> List[Path]:
        if not self.fixtures_dir.exists():
            return []
        return sorted(self.fixtures_dir.glob("*.txt"))

    def load(self, path: Path) -> List[Fixture]:
        with open(path, "r", encoding="utf-8") as f:
            return parse_fixtures(f, path.name)

    def load_all(self) -> List[Fixture]:
        fixtures = []
        for path in self.fixture_files():
            fixtures.extend(self.load(path))
        return fixtures

    def verify(self, fixtures: Optional[List[Fixture]] = None) -> Verdict:
        """Every fixture expression reduces to its recorded normal form."""
        fixtures = self.load_all() if fixtures is None else fixtures
        verdict = Verdict(f"{len(fixtures)} regression fixtures reduce to their recorded normal forms")
        for fixture in fixtures:
            try:
                ok, found = check_fixture(fixture)
            except QBundleError as e:
                verdict.fail(f"{fixture.label}: {e}")
                continue
            verdict.record(ok, lambda: f"{fixture.label}: {fixture.expression} -> {found}, expected {fixture.expected}")
        return verdict

    def save_report(self, report: SuiteReport, timings: bool = False) -> str:
        """Write the report as JSON and return its path."""
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        file_path = self.reports_dir / f"{report.suite}_report_{timestamp}.json"
        file_path.write_bytes(report.to_json(timings))
        engine_logger.log_report_saved(report.suite, str(file_path))
        return str(file_path)


def load_theta(path: str) -> Dict[Tuple[int, int], int]:
    """Exponent file for `twist-product --theta-file`."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse_theta(f)
    except OSError as e:
        raise PresentationError(f"cannot read theta file {path}: {e}")
