"""Rows of the tabular datasets written by sweeps and figure presets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .thermo import Branch, ThermoPoint

SWEEP_COLUMNS = ("d", "t", "S", "c", "alpha", "gamma", "branch", "residual")
EXCURSION_COLUMNS = ("dd", "t", "delta_t", "dd_dt_over_t", "status")
STATUS_COLUMN = "status"


def format_float(value: float | None) -> str:
    """17 significant digits, ``nan`` for missing values."""
    if value is None or math.isnan(value):
        return "nan"
    return "%.17g" % value


@dataclass(frozen=True, slots=True)
class SweepRow:
    """One (d, t) row of a sweep.

    Attributes:
        d: Deviation (the proxy +-d_eps for branch rows).
        t: Temperature.
        branch: "minus"/"plus" for the limits of d = 0, empty otherwise.
        entropy: S.
        specific_heat: c_d.
        alpha_d: dS/dd.
        gamma_d: Grueneisen ratio.
        residual: Final residual of the nonlinear solve.
        status: "ok" or the name of the error that stopped the row.
        diagnostics: Full diagnostics for the manifest.
        seconds: Wall-clock time of the row.
    """

    d: float
    t: float
    branch: Branch = Branch.NONE
    entropy: float = math.nan
    specific_heat: float = math.nan
    alpha_d: float = math.nan
    gamma_d: float | None = None
    residual: float = math.nan
    status: str = "ok"
    diagnostics: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @classmethod
    def from_point(
        cls, point: ThermoPoint, branch: Branch = Branch.NONE, seconds: float = 0.0
    ) -> SweepRow:
        return cls(
            d=point.d,
            t=point.t,
            branch=branch,
            entropy=point.entropy,
            specific_heat=point.specific_heat,
            alpha_d=point.alpha_d,
            gamma_d=point.gamma_d,
            residual=point.diagnostics.get("residual", math.nan),
            diagnostics=point.diagnostics,
            seconds=seconds,
        )

    def _to_row(self, with_status: bool = False) -> list[str]:
        row = [
            format_float(self.d),
            format_float(self.t),
            format_float(self.entropy),
            format_float(self.specific_heat),
            format_float(self.alpha_d),
            format_float(self.gamma_d),
            str(self.branch),
            format_float(self.residual),
        ]
        if with_status:
            row.append(self.status)
        return row


@dataclass(frozen=True, slots=True)
class ExcursionRow:
    """Symmetric crossing excursion -dd/2 -> dd/2 at initial temperature t.

    Attributes:
        dd: Width of the excursion.
        t: Initial temperature.
        delta_t: Interval-averaged temperature change.
        status: "ok" or the error name.
    """

    dd: float
    t: float
    delta_t: float = math.nan
    status: str = "ok"

    @property
    def dd_dt_over_t(self) -> float:
        return self.dd * self.delta_t / self.t

    def _to_row(self) -> list[str]:
        return [
            format_float(self.dd),
            format_float(self.t),
            format_float(self.delta_t),
            format_float(self.dd_dt_over_t),
            self.status,
        ]
