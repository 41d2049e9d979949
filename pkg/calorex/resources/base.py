"""Base resource with typed offload helpers."""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Iterable
from typing import TYPE_CHECKING, ParamSpec, TypeVar

from ..config import CalorexConfig

if TYPE_CHECKING:
    from ..session import CalorexSession

_P = ParamSpec("_P")
_R = TypeVar("_R")


class BaseResource:
    """Base class for session resources.

    Subclasses call ``_offload`` for a single blocking engine call and
    ``_offload_all`` for independent calls whose results must come back in
    submission order.
    """

    def __init__(self, session: CalorexSession) -> None:
        self._session = session

    @property
    def _config(self) -> CalorexConfig:
        return self._session.config

    async def _offload(
        self, func: Callable[_P, _R], /, *args: _P.args, **kwargs: _P.kwargs
    ) -> _R:
        """Run ``func`` on the session's worker pool.

        Args:
            func: Blocking engine function.
            *args: Positional arguments forwarded to ``func``.
            **kwargs: Keyword arguments forwarded to ``func``.

        Returns:
            Whatever ``func`` returns.
        """
        return await self._session._run(func, *args, **kwargs)

    async def _offload_all(self, calls: Iterable[Callable[[], _R]]) -> list[_R]:
        """Run zero-argument calls concurrently; results keep the order of ``calls``."""
        return list(await asyncio.gather(*(self._offload(call) for call in calls)))
