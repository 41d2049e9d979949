"""Sweeps over (d, t) grids."""

from __future__ import annotations

import functools
import logging
import time
from collections.abc import Sequence

import numpy as np

from ..config import CalorexConfig
from ..exceptions import CalorexError
from ..models import Branch, SweepRow
from ..solver.nlie import AuxFunctions
from ..solver.thermo import solve_point
from .base import BaseResource

logger = logging.getLogger(__name__)


def d_grid(d_min: float, d_max: float, d_steps: int) -> list[float]:
    """``d_steps`` equally spaced deviations including both ends."""
    if d_steps < 2:
        return [float(d_min)]
    return [float(d) for d in np.linspace(d_min, d_max, d_steps)]


def chain_jobs(
    d_values: Sequence[float], d_eps: float, branches: bool = True
) -> list[tuple[float, Branch]]:
    """Deviations of one temperature row in increasing d.

    Points with |d| < d_eps are dropped; the limits d = 0- and d = 0+ are
    represented by the proxies -d_eps and +d_eps, flagged as branch rows.
    """
    jobs = [(d, Branch.NONE) for d in d_values if abs(d) >= d_eps]
    if branches:
        jobs += [(-d_eps, Branch.MINUS), (d_eps, Branch.PLUS)]
    return sorted(jobs, key=lambda job: job[0])


def run_chain(
    jobs: Sequence[tuple[float, Branch]], t: float, h: float, config: CalorexConfig
) -> list[SweepRow]:
    """Solve one temperature row in order, warm-starting each point from the last.

    A failed point produces a row carrying the error name as its status and
    restarts the warm-start chain.
    """
    rows: list[SweepRow] = []
    previous: AuxFunctions | None = None
    for d, branch in jobs:
        start = time.perf_counter()
        try:
            point, aux = solve_point(d, t, h, config, initial=previous)
        except CalorexError as e:
            logger.warning("Sweep point d=%.6g t=%.6g failed: %s", d, t, e)
            rows.append(
                SweepRow(
                    d=d,
                    t=t,
                    branch=branch,
                    status=type(e).__name__,
                    diagnostics={"error": str(e), **e.diagnostics},
                    seconds=time.perf_counter() - start,
                )
            )
            previous = None
            continue
        rows.append(SweepRow.from_point(point, branch, time.perf_counter() - start))
        previous = aux if config.nlie.warm_start else None
    logger.info("Finished sweep row t=%.6g (%d points)", t, len(rows))
    return rows


class SweepResource(BaseResource):
    """Handler for (d, t) sweeps."""

    async def run(
        self,
        d_values: Sequence[float],
        t_values: Sequence[float],
        h: float = 0.0,
        *,
        branches: bool = True,
    ) -> list[SweepRow]:
        """Returns the sweep rows, temperature-major and increasing in d.

        Each temperature row runs sequentially in d on one worker; different
        temperatures run in parallel. The order of the result does not depend
        on completion order.

        Args:
            d_values: Deviations to visit.
            t_values: Temperatures, one warm-started chain each.
            h: Magnetic field.
            branches: Add the two branch rows at +-d_eps per temperature.

        Returns:
            All rows, including failed ones with their status.
        """
        jobs = chain_jobs(d_values, self._config.nlie.d_eps, branches)
        calls = [functools.partial(run_chain, jobs, t, h, self._config) for t in t_values]
        per_t = await self._offload_all(calls)
        return [row for rows in per_t for row in rows]
