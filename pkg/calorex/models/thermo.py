"""Thermodynamic result records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any


class StencilKind(StrEnum):
    """Finite-difference stencil used for a d-derivative."""

    CENTRAL = "central"
    FORWARD = "forward"
    BACKWARD = "backward"


class Branch(StrEnum):
    """Side of the isotropic point a d = 0 proxy row belongs to."""

    NONE = ""
    MINUS = "minus"
    PLUS = "plus"


@dataclass(frozen=True, slots=True)
class StencilInfo:
    """How a finite-difference derivative was taken.

    Attributes:
        kind: Central or one-sided stencil.
        step: Step size of the coarse stencil.
        richardson: Whether one Richardson step was applied.
    """

    kind: StencilKind
    step: float
    richardson: bool

    def _to_dict(self) -> dict:
        return {"kind": str(self.kind), "step": self.step, "richardson": self.richardson}


@dataclass(frozen=True, slots=True)
class ThermoPoint:
    """Thermodynamics of the chain at one (d, t, h).

    Attributes:
        d: Deviation from the isotropic point.
        t: Temperature (solver convention).
        h: Magnetic field (solver convention).
        f_rel: Free energy per site minus the ground-state energy.
        entropy: Entropy per site (k_B = 1).
        specific_heat: c_d = t dS/dt.
        alpha_d: dS/dd at fixed t.
        gamma_d: Grueneisen ratio alpha_d / c_d, None if c_d vanishes.
        nematic_b: Thermal part of the conjugate variable, -d f_rel/dd.
        diagnostics: Residuals, iteration counts and stencils.
    """

    d: float
    t: float
    h: float
    f_rel: float
    entropy: float
    specific_heat: float
    alpha_d: float
    gamma_d: float | None
    nematic_b: float
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def delta(self) -> float:
        return self.d + 1.0

    def _to_dict(self) -> dict:
        return {
            "d": self.d,
            "delta": self.delta,
            "t": self.t,
            "h": self.h,
            "f_rel": self.f_rel,
            "S": self.entropy,
            "c": self.specific_heat,
            "alpha": self.alpha_d,
            "gamma": self.gamma_d,
            "nematic_b": self.nematic_b,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def _from_dict(cls, data: dict) -> ThermoPoint:
        gamma = data.get("gamma")
        return cls(
            d=data["d"],
            t=data["t"],
            h=data.get("h", 0.0),
            f_rel=data["f_rel"],
            entropy=data["S"],
            specific_heat=data["c"],
            alpha_d=data["alpha"],
            gamma_d=None if gamma is None or math.isnan(gamma) else gamma,
            nematic_b=data["nematic_b"],
            diagnostics=data.get("diagnostics", {}),
        )


@dataclass(frozen=True, slots=True)
class JumpLimits:
    """Entropy on both sides of the isotropic point.

    Attributes:
        t: Temperature.
        d_eps: Proxy distance used.
        s_minus: S(-d_eps, t).
        s_plus: S(+d_eps, t).
        s_minus_half: S(-d_eps/2, t).
        s_plus_half: S(+d_eps/2, t).
    """

    t: float
    d_eps: float
    s_minus: float
    s_plus: float
    s_minus_half: float
    s_plus_half: float

    @property
    def jump(self) -> float:
        return self.s_plus - self.s_minus

    @property
    def ratio(self) -> float:
        return self.s_plus / self.s_minus

    @property
    def extrapolated_jump(self) -> float:
        """Linear extrapolation in d_eps to d_eps -> 0."""
        return 2.0 * (self.s_plus_half - self.s_minus_half) - self.jump

    def _to_dict(self) -> dict:
        return {
            "t": self.t,
            "d_eps": self.d_eps,
            "s_minus": self.s_minus,
            "s_plus": self.s_plus,
            "s_minus_half": self.s_minus_half,
            "s_plus_half": self.s_plus_half,
            "jump": self.jump,
            "extrapolated_jump": self.extrapolated_jump,
        }


@dataclass(frozen=True, slots=True)
class VelocityVerdict:
    """Outcome of comparing the measured low-t entropy slope with two velocity conventions.

    Attributes:
        theta: Anisotropy angle the slope was measured at.
        measured_slope: dS/dt from the solver at low temperature.
        slope_standard: pi / (3 v) with v = pi sin(theta) / theta.
        slope_alternative: pi / (3 v') with v' = (pi/2) sin(theta) / theta.
        verdict: "standard" or "alternative", whichever lies closer.
    """

    theta: float
    measured_slope: float
    slope_standard: float
    slope_alternative: float
    verdict: str

    def _to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "measured_slope": self.measured_slope,
            "slope_standard": self.slope_standard,
            "slope_alternative": self.slope_alternative,
            "verdict": self.verdict,
        }
