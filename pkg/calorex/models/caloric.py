"""Caloric-effect result records."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any


class CaloricMethod(StrEnum):
    """Which temperature-change definition to evaluate."""

    PAPER = "paper"
    ISENTROPE = "isentrope"
    BOTH = "both"


class IntervalSide(StrEnum):
    """Position of a d-interval relative to the isotropic point."""

    NEGATIVE = "negative"
    POSITIVE = "positive"
    CROSSING = "crossing"


@dataclass(frozen=True, slots=True)
class GammaIntegral:
    """Quadrature of the Grueneisen ratio over d.

    Attributes:
        value: Integral of Gamma_d over [d1, d2] (including the crossing term).
        smooth_part: Contribution of the segments away from d = 0.
        jump_contribution: ln[S(side of d2) / S(side of d1)] across d = 0, or 0.
        nodes: Gauss-Legendre nodes used per segment.
        regime_flag: c/S deviated from 1 by more than 20% at the crossing.
    """

    value: float
    smooth_part: float
    jump_contribution: float
    nodes: tuple[int, ...] = ()
    regime_flag: bool = False


@dataclass(frozen=True, slots=True)
class CaloricResult:
    """Caloric observables for one excursion d1 -> d2 at initial temperature t.

    Attributes:
        d1: Start of the excursion.
        d2: End of the excursion.
        t_initial: Initial temperature.
        delta_S: S(d2, t) - S(d1, t).
        delta_t_paper: (t / (d2 - d1)) times the integral of Gamma_d, or None if not requested.
        delta_t_isentrope: t2 - t1 along the isentrope, or None if not requested.
        jump_contribution: Part of delta_t_paper due to the d = 0 crossing.
        metadata: Quadrature metadata and regime flags.
    """

    d1: float
    d2: float
    t_initial: float
    delta_S: float
    delta_t_paper: float | None = None
    delta_t_isentrope: float | None = None
    jump_contribution: float = 0.0
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def side(self) -> IntervalSide:
        return interval_side(self.d1, self.d2)

    @property
    def normalized_magnitude(self) -> float | None:
        """delta_d * delta_t / t, the dimensionless caloric magnitude."""
        if self.delta_t_paper is None:
            return None
        return (self.d2 - self.d1) * self.delta_t_paper / self.t_initial

    def _to_dict(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "t": self.t_initial,
            "delta_S": self.delta_S,
            "delta_t_paper": self.delta_t_paper,
            "delta_t_isentrope": self.delta_t_isentrope,
            "jump_contribution": self.jump_contribution,
            "side": str(self.side),
            "metadata": self.metadata,
        }


def interval_side(d1: float, d2: float) -> IntervalSide:
    lo, hi = min(d1, d2), max(d1, d2)
    if hi <= 0.0:
        return IntervalSide.NEGATIVE
    if lo >= 0.0:
        return IntervalSide.POSITIVE
    return IntervalSide.CROSSING
