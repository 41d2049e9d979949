"""Async front end of the calorex engine."""

from __future__ import annotations

import asyncio
import functools
import logging
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import Any, ParamSpec, TypeVar

from .config import CalorexConfig

logger = logging.getLogger(__name__)

_P = ParamSpec("_P")
_R = TypeVar("_R")


class CalorexSession:
    """Async session running the numerical engine on a worker pool."""

    _config: CalorexConfig
    _jobs: int
    _executor: ThreadPoolExecutor | None

    def __init__(self, config: CalorexConfig | None = None, jobs: int | None = None):
        """Initialize the session.

        Args:
            config: Engine configuration (defaults to ``CalorexConfig.load()``).
            jobs: Worker threads (defaults to the number of CPUs).
        """
        self._config = config or CalorexConfig.load()
        self._jobs = max(1, jobs or os.cpu_count() or 1)
        self._executor = None

        from .resources import CaloricResource, PointResource, SweepResource, ValidationResource

        self.points = PointResource(self)
        self.sweeps = SweepResource(self)
        self.caloric = CaloricResource(self)
        self.validation = ValidationResource(self)

    @property
    def config(self) -> CalorexConfig:
        return self._config

    @property
    def jobs(self) -> int:
        return self._jobs

    def _get_executor(self) -> ThreadPoolExecutor:
        if self._executor is None:
            self._executor = ThreadPoolExecutor(
                max_workers=self._jobs, thread_name_prefix="calorex"
            )
            logger.debug("Started worker pool with %d threads", self._jobs)
        return self._executor

    async def _run(
        self, func: Callable[_P, _R], /, *args: _P.args, **kwargs: _P.kwargs
    ) -> _R:
        """Run a blocking engine call on the worker pool."""
        loop = asyncio.get_running_loop()
        call = functools.partial(func, *args, **kwargs)
        return await loop.run_in_executor(self._get_executor(), call)

    async def close(self) -> None:
        """Shut the worker pool down."""
        if self._executor is not None:
            executor, self._executor = self._executor, None
            await asyncio.to_thread(executor.shutdown, True)

    async def __aenter__(self) -> CalorexSession:
        return self

    async def __aexit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        await self.close()
