"""
Logging configuration for the qbundle symbolic engine.
Provides structured logging for algebra construction and verification suites.
"""

import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import orjson
from loguru import logger

from config import settings


class EngineLogger:
    """Specialized logger for engine builds and verification runs."""

    def __init__(self, log_file: Optional[str] = None):
        self.log_file = log_file or settings.logging.file
        self.setup_logger()

    def setup_logger(self):
        """Configure the logger with appropriate handlers and formatting."""
        # Remove default handler
        logger.remove()

        # Console handler on stderr so JSON reports on stdout stay clean
        if settings.logging.console:
            logger.add(
                sys.stderr,
                format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
                level=settings.logging.level,
                colorize=True,
            )

        # File handler for all logs
        Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            self.log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level="DEBUG",
            rotation="10 MB",
            retention="30 days",
            compression="zip",
        )

        # Special file for verification records
        verification_log_file = Path(settings.storage.logs_dir) / "verification.log"
        verification_log_file.parent.mkdir(parents=True, exist_ok=True)

        logger.add(
            verification_log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[suite]} | {extra[operation]} | {message}",
            level="INFO",
            rotation="50 MB",
            retention="90 days",
            compression="zip",
            filter=lambda record: "verification" in record["extra"],
        )

    def log_suite_start(self, suite: str, parameters: Dict[str, Any]):
        """Log the start of a verification suite."""
        logger.bind(verification=True, suite=suite, operation="start").info(
            f"Starting suite {suite} with {parameters}"
        )

    def log_check_result(self, suite: str, check_id: str, status: str, witness: Optional[str] = None):
        """Log a single check outcome."""
        bound = logger.bind(verification=True, suite=suite, operation="check")
        if status == "fail":
            bound.warning(f"{check_id} failed; witness: {witness}")
        else:
            bound.debug(f"{check_id}: {status}")

    def log_check_error(self, suite: str, check_id: str, error: Exception):
        """Log a check that raised instead of reporting."""
        logger.bind(verification=True, suite=suite, operation="check").error(
            f"Error during {check_id}: {error}"
        )

    def log_suite_finished(self, suite: str, passed: int, failed: int, skipped: int, elapsed: Optional[float] = None):
        """Log suite completion."""
        took = "" if elapsed is None else f" in {elapsed:.1f}s"
        logger.bind(verification=True, suite=suite, operation="finish", elapsed=elapsed).info(
            f"Suite {suite} finished{took}: {passed} passed, {failed} failed, {skipped} skipped"
        )

    def log_budget_exhausted(self, presentation: str, budget: int):
        """Log reduction budget exhaustion."""
        logger.bind(verification=True, suite=presentation, operation="budget").error(
            f"Reduction budget of {budget} exhausted in {presentation}"
        )

    def log_build(self, name: str, generators: int, rules: int, completion_rules: int = 0):
        """Log construction of a presented algebra."""
        logger.bind(verification=True, suite=name, operation="build").info(
            f"Built {name}: {generators} generators, {rules} rules ({completion_rules} from completion)"
        )

    def log_report_saved(self, suite: str, file_path: str):
        """Log when a report is written to disk."""
        logger.bind(verification=True, suite=suite, operation="report_save").info(
            f"Saved report for {suite} to {file_path}"
        )


class VerificationMetrics:
    """Track verification statistics across runs."""

    def __init__(self):
        self.metrics_file = Path(settings.storage.logs_dir) / "verification_metrics.json"
        self.metrics_file.parent.mkdir(parents=True, exist_ok=True)
        self.metrics = self.load_metrics()

    def load_metrics(self) -> Dict[str, Any]:
        """Load existing metrics from file."""
        if self.metrics_file.exists():
            try:
                return orjson.loads(self.metrics_file.read_bytes())
            except Exception as e:
                logger.error(f"Failed to load metrics: {e}")
                return {}
        return {}

    def save_metrics(self):
        """Save metrics to file."""
        try:
            self.metrics_file.write_bytes(orjson.dumps(self.metrics, option=orjson.OPT_INDENT_2))
        except Exception as e:
            logger.error(f"Failed to save metrics: {e}")

    def update_suite_metrics(self, suite: str, passed: int, failed: int):
        """Update metrics for a specific suite."""
        today = datetime.now().strftime("%Y-%m-%d")

        day = self.metrics.setdefault(suite, {}).setdefault(
            today, {"runs": 0, "passed": 0, "failed": 0, "last_run": None}
        )
        day["runs"] += 1
        day["passed"] += passed
        day["failed"] += failed
        day["last_run"] = datetime.now().isoformat()

        self.save_metrics()

    def get_suite_summary(self, suite: str) -> Dict[str, Any]:
        """Get summary statistics for a suite."""
        if suite not in self.metrics:
            return {}

        suite_data = self.metrics[suite]
        return {
            "total_runs": sum(day["runs"] for day in suite_data.values()),
            "total_passed": sum(day["passed"] for day in suite_data.values()),
            "total_failed": sum(day["failed"] for day in suite_data.values()),
            "days_run": len(suite_data),
            "last_run": max(day["last_run"] for day in suite_data.values()) if suite_data else None,
        }


# Global logger instance
engine_logger = EngineLogger()
verification_metrics = VerificationMetrics()


def get_logger(name: str = __name__):
    """Get a logger instance with the specified name."""
    return logger.bind(name=name)


if __name__ == "__main__":
    # Test logging functionality
    test_logger = get_logger("test")
    test_logger.info("Testing logging system")

    engine_logger.log_suite_start("confluence", {"n": 2})
    engine_logger.log_check_result("confluence", "confluence.mq2", "pass")
    engine_logger.log_suite_finished("confluence", 1, 0, 0)

    verification_metrics.update_suite_metrics("confluence", 1, 0)
    print("Logging system test completed")
