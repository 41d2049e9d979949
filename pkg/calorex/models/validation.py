"""Validation report records."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any


class Suite(StrEnum):
    """Named validation suites."""

    QUICK = "quick"
    FULL = "full"


@dataclass(frozen=True, slots=True)
class CheckResult:
    """Outcome of one validation check.

    Attributes:
        name: Check identifier.
        passed: Whether the measured values met the bound.
        measured: Measured values keyed by name.
        expected: Reference values or bounds.
        message: Error message when the check raised.
        seconds: Wall-clock time.
    """

    name: str
    passed: bool
    measured: dict[str, Any] = field(default_factory=dict)
    expected: dict[str, Any] = field(default_factory=dict)
    message: str | None = None
    seconds: float = 0.0

    def _to_dict(self) -> dict:
        data: dict[str, Any] = {
            "check": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "expected": self.expected,
            "seconds": self.seconds,
        }
        if self.message is not None:
            data["message"] = self.message
        return data


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """All checks of a suite run.

    Attributes:
        suite: Suite that was run.
        checks: Results in execution order.
    """

    suite: Suite
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def _to_dict(self) -> dict:
        return {
            "suite": str(self.suite),
            "passed": self.passed,
            "checks": [check._to_dict() for check in self.checks],
        }
