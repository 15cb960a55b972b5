"""
Logging utilities for grayforge.
Provides structured logging for constructions, checks and sweeps.
"""

import logging
import sys
import time
from typing import Any, Optional

import structlog

from .config import get_global_config, is_development, is_production, is_testing


def setup_logging(service_name: str) -> structlog.stdlib.BoundLogger:
    """
    Setup structured logging for a module.

    Args:
        service_name: Name of the component for log identification

    Returns:
        Configured structured logger
    """

    config = get_global_config()

    # stdout carries command output (reports, JSON); logs go to stderr
    logging.basicConfig(
        level=getattr(logging, config.log_level.upper()),
        format="%(message)s",
        handlers=[logging.StreamHandler(sys.stderr)]
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer() if is_production()
            else structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    logger = structlog.get_logger(service_name)
    logger = logger.bind(service=service_name, environment=_get_environment())

    return logger


def _get_environment() -> str:
    """Get the current environment name."""
    if is_production():
        return "production"
    elif is_testing():
        return "testing"
    elif is_development():
        return "development"
    else:
        return "unknown"


def log_construction(
    logger: structlog.stdlib.BoundLogger,
    family: str,
    status: str,
    **kwargs
) -> None:
    """
    Log a profile construction step with standardized fields.

    Args:
        logger: Structured logger instance
        family: Family tag (gray-symmetric, einstein, ...)
        status: started, completed or failed
        **kwargs: Additional context (parameters, timings)
    """

    logger.info(
        "Profile construction",
        family=family,
        status=status,
        **kwargs
    )


def log_check(
    logger: structlog.stdlib.BoundLogger,
    report: Any,
    **kwargs
) -> None:
    """
    Log the outcome of a verification report.

    Args:
        logger: Structured logger instance
        report: VerificationReport (anything with `title`, `passed`, `entries`)
        **kwargs: Additional context
    """

    log_data = {
        "activity": "verification",
        "check": report.title,
        "entries": len(report.entries),
        "passed": report.passed,
    }
    failures = [entry.name for entry in report.entries if not entry.passed]
    if failures:
        log_data["failed_entries"] = failures[:10]

    log_data.update(kwargs)

    if report.passed:
        logger.info("Verification passed", **log_data)
    else:
        logger.warning("Verification failed", **log_data)


def log_sweep_metrics(
    logger: structlog.stdlib.BoundLogger,
    kind: str,
    points: int,
    failures: int,
    elapsed_ms: float,
    **kwargs
) -> None:
    """
    Log parameter-sweep throughput.

    Args:
        logger: Structured logger instance
        kind: Sweep kind
        points: Number of grid points evaluated
        failures: Points whose evaluation raised
        elapsed_ms: Wall time in milliseconds
        **kwargs: Additional metrics
    """

    logger.info(
        "Sweep metrics",
        kind=kind,
        points=points,
        failures=failures,
        elapsed_ms=elapsed_ms,
        success_rate=(points - failures) / points if points > 0 else 0,
        **kwargs
    )


class ConstructionContext:
    """Context manager that times a construction and logs its outcome."""

    def __init__(
        self,
        logger: structlog.stdlib.BoundLogger,
        family: str,
        **params: Any
    ):
        self.logger = logger
        self.family = family
        self.params = params
        self.start_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        log_construction(self.logger, self.family, "started", **self.params)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        elapsed_ms = (time.perf_counter() - self.start_time) * 1000

        if exc_type is None:
            log_construction(
                self.logger,
                self.family,
                "completed",
                elapsed_ms=elapsed_ms,
                **self.params
            )
        else:
            log_construction(
                self.logger,
                self.family,
                "failed",
                elapsed_ms=elapsed_ms,
                error_type=exc_type.__name__,
                error_message=str(exc_val),
                **self.params
            )

        return False  # Don't suppress exceptions


def construction_context(
    logger: structlog.stdlib.BoundLogger,
    family: str,
    **params: Any
) -> ConstructionContext:
    """
    Create a construction context manager.

    Usage:
        with construction_context(logger, "einstein", genus=3, k=1):
            profile = einstein_profile(spec)
    """
    return ConstructionContext(logger, family, **params)
