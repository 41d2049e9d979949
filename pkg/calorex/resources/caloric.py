"""Caloric excursions."""

from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Sequence

from ..config import CalorexConfig
from ..exceptions import CalorexError
from ..models import CaloricMethod, CaloricResult, ExcursionRow
from ..solver.caloric import (
    delta_entropy,
    delta_temperature_isentrope,
    delta_temperature_paper,
)
from .base import BaseResource

logger = logging.getLogger(__name__)


def crossing_row(dd: float, t: float, config: CalorexConfig) -> ExcursionRow:
    """Interval-averaged temperature change of the excursion -dd/2 -> dd/2."""
    try:
        result = delta_temperature_paper(-dd / 2.0, dd / 2.0, t, config)
    except CalorexError as e:
        logger.warning("Excursion dd=%.4g t=%.4g failed: %s", dd, t, e)
        return ExcursionRow(dd=dd, t=t, status=type(e).__name__)
    return ExcursionRow(dd=dd, t=t, delta_t=result.delta_t_paper or 0.0)


class CaloricResource(BaseResource):
    """Handler for adiabatic excursions in d."""

    async def excursion(
        self,
        d1: float,
        d2: float,
        t: float,
        method: CaloricMethod | str = CaloricMethod.PAPER,
    ) -> CaloricResult:
        """Returns the caloric observables of d1 -> d2 at initial temperature t.

        With ``method="both"`` the two temperature-change definitions run
        concurrently.

        Args:
            d1: Start of the excursion.
            d2: End of the excursion.
            t: Initial temperature.
            method: "paper", "isentrope" or "both".

        Returns:
            The result with the requested definitions filled in.

        Raises:
            QuadratureNotConverged: If the Gamma quadrature does not settle.
            NoBracket: If the isentrope cannot be matched.
        """
        method = CaloricMethod(method)
        config = self._config
        if d1 == d2:
            return CaloricResult(
                d1=d1,
                d2=d2,
                t_initial=t,
                delta_S=0.0,
                delta_t_paper=0.0 if method is not CaloricMethod.ISENTROPE else None,
                delta_t_isentrope=0.0 if method is not CaloricMethod.PAPER else None,
            )
        if method is CaloricMethod.PAPER:
            return await self._offload(delta_temperature_paper, d1, d2, t, config)
        if method is CaloricMethod.ISENTROPE:
            delta_s, delta_t = await self._offload_all(
                [
                    functools.partial(delta_entropy, d1, d2, t, config),
                    functools.partial(delta_temperature_isentrope, d1, d2, t, config),
                ]
            )
            return CaloricResult(
                d1=d1, d2=d2, t_initial=t, delta_S=delta_s, delta_t_isentrope=delta_t
            )
        paper, isentrope = await self._offload_all(
            [
                functools.partial(delta_temperature_paper, d1, d2, t, config),
                functools.partial(delta_temperature_isentrope, d1, d2, t, config),
            ]
        )
        return dataclasses.replace(paper, delta_t_isentrope=isentrope)

    async def crossings(
        self, widths: Sequence[float], t_values: Sequence[float]
    ) -> list[ExcursionRow]:
        """Returns symmetric crossings for every (t, dd), temperature-major."""
        calls = [
            functools.partial(crossing_row, dd, t, self._config)
            for t in t_values
            for dd in widths
        ]
        return await self._offload_all(calls)
