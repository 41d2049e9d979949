"""Validation suites."""

from __future__ import annotations

import functools

from ..models import Suite, ValidationReport
from ..validation import FULL_CHECKS, QUICK_CHECKS, run_check
from .base import BaseResource


class ValidationResource(BaseResource):
    """Handler for the oracle comparison suites."""

    async def run(self, suite: Suite | str = Suite.QUICK) -> ValidationReport:
        """Returns the report of the quick or full suite.

        Checks run concurrently; the report lists them in suite order.
        """
        suite = Suite(suite)
        checks = QUICK_CHECKS if suite is Suite.QUICK else FULL_CHECKS
        results = await self._offload_all(
            functools.partial(run_check, name, check, self._config)
            for name, check in checks.items()
        )
        return ValidationReport(suite=suite, checks=results)
