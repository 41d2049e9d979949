"""Spin chain parameters and the maps between drives, anisotropy and deviation."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

from ..exceptions import OutOfSupportedRange

SOLVER_ENERGY_SCALE = 2.0
"""Ratio between energies produced by the integral equations and those of
H = sum_n J(S^x S^x + S^y S^y + Delta S^z S^z) with J = 1. Solver temperatures,
fields and free energies are all expressed in the solver convention."""

DEFAULT_DELTA_MAX = 3.0


class Regime(StrEnum):
    """Anisotropy regime of the antiferromagnetic branch."""

    EASY_PLANE = "easy_plane"
    EASY_AXIS = "easy_axis"


@dataclass(frozen=True, slots=True)
class EasyPlane:
    """Easy-plane regime, Delta = cos(theta).

    Attributes:
        theta: Anisotropy angle in [0, pi/2] on the supported branch.
    """

    theta: float

    @property
    def tag(self) -> Regime:
        return Regime.EASY_PLANE

    @property
    def parameter(self) -> float:
        return self.theta


@dataclass(frozen=True, slots=True)
class EasyAxisAF:
    """Easy-axis antiferromagnetic regime, Delta = cosh(phi).

    Attributes:
        phi: Anisotropy rapidity, strictly positive.
    """

    phi: float

    @property
    def tag(self) -> Regime:
        return Regime.EASY_AXIS

    @property
    def parameter(self) -> float:
        return self.phi


RegimeParams = EasyPlane | EasyAxisAF


@dataclass(frozen=True, slots=True)
class ExchangeCouplings:
    """Exchange constants of the chain.

    Attributes:
        J: In-plane exchange; only |J| matters and it sets the energy unit.
        Jz: Longitudinal exchange in the same units as J.
    """

    J: float
    Jz: float

    def normalized(self) -> ExchangeCouplings:
        """Couplings in units of |J| (J = 1)."""
        if self.J == 0:
            raise OutOfSupportedRange("In-plane exchange J must be nonzero", {"J": self.J})
        return ExchangeCouplings(J=1.0, Jz=self.Jz / abs(self.J))

    @property
    def delta(self) -> float:
        return self.normalized().Jz


@dataclass(frozen=True, slots=True)
class AnisotropyPoint:
    """Location of the model on the antiferromagnetic branch.

    Attributes:
        delta: Anisotropy Delta = Jz/J.
        regime: Easy-plane or easy-axis parameters.
        d: Deviation from the isotropic point, d = Delta - 1.
    """

    delta: float
    regime: RegimeParams
    d: float

    @property
    def tag(self) -> Regime:
        return self.regime.tag

    @property
    def theta(self) -> float | None:
        return self.regime.theta if isinstance(self.regime, EasyPlane) else None

    @property
    def phi(self) -> float | None:
        return self.regime.phi if isinstance(self.regime, EasyAxisAF) else None

    def _to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "d": self.d,
            "regime": str(self.tag),
            "theta": self.theta,
            "phi": self.phi,
        }


@dataclass(frozen=True, slots=True)
class DriveCouplings:
    """Linear couplings of the longitudinal exchange to strain and electric field.

    Attributes:
        f_zz: Magneto-elastic tensor component (per unit strain).
        h_izz: Electro-magnetic tensor components for i = x, y, z (per unit field).
    """

    f_zz: float = 0.0
    h_izz: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        values = (self.f_zz, *self.h_izz)
        if len(self.h_izz) != 3 or not all(math.isfinite(v) for v in values):
            raise ValueError(
                "Drive couplings must be three finite field components and finite f_zz"
            )


@dataclass(frozen=True, slots=True)
class ExternalConditions:
    """Reduced temperature and magnetic field (solver convention).

    Attributes:
        t: Temperature, strictly positive.
        h: Magnetic field.
    """

    t: float
    h: float = 0.0

    def __post_init__(self) -> None:
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise ValueError(f"Temperature must be positive and finite, got {self.t}")


def delta_from_d(d: float) -> float:
    """Anisotropy on the antiferromagnetic branch for deviation ``d``."""
    return d + 1.0


def classify(delta: float, delta_max: float = DEFAULT_DELTA_MAX) -> AnisotropyPoint:
    """Assign the regime of an anisotropy on the antiferromagnetic branch.

    Delta in [0, 1] is easy-plane (Delta = 0 being the free-fermion endpoint,
    theta = pi/2); Delta in (1, delta_max] is easy-axis.

    Raises:
        OutOfSupportedRange: For non-finite, negative, or too large anisotropies.
    """
    if not math.isfinite(delta) or delta < 0.0 or delta > delta_max:
        raise OutOfSupportedRange(
            f"Anisotropy {delta} outside the supported range [0, {delta_max}]; "
            "the ferromagnetic branch is reachable only through ferro_free_energy",
            diagnostics={"delta": delta, "delta_max": delta_max},
        )
    regime: RegimeParams
    if delta <= 1.0:
        regime = EasyPlane(theta=math.acos(delta))
    else:
        regime = EasyAxisAF(phi=math.acosh(delta))
    return AnisotropyPoint(delta=delta, regime=regime, d=delta - 1.0)


def classify_d(d: float, delta_max: float = DEFAULT_DELTA_MAX) -> AnisotropyPoint:
    """Classify by deviation; d is stored exactly as given.

    The regime parameter is computed from d directly, which keeps full relative
    precision of theta and phi close to the isotropic point.
    """
    point = classify(delta_from_d(d), delta_max=delta_max)
    regime: RegimeParams
    if d <= 0.0:
        regime = EasyPlane(theta=2.0 * math.asin(math.sqrt(-d / 2.0)))
    else:
        regime = EasyAxisAF(phi=math.log1p(d + math.sqrt(d * (2.0 + d))))
    return AnisotropyPoint(delta=point.delta, regime=regime, d=d)


def drive_to_d(
    base_delta: float,
    couplings: DriveCouplings,
    strain: float,
    field: Sequence[float],
    delta_max: float = DEFAULT_DELTA_MAX,
) -> float:
    """Deviation after strain and electric-field renormalization of Jz.

    First order in the drives: Delta' = Delta (1 - f_zz strain - sum_i h_izz E_i);
    products of different drives are discarded.

    Raises:
        OutOfSupportedRange: If base_delta or the renormalized anisotropy is unsupported.
    """
    classify(base_delta, delta_max=delta_max)
    if len(field) != 3:
        raise ValueError("Electric field must have three components")
    shift = couplings.f_zz * strain + sum(h * e for h, e in zip(couplings.h_izz, field))
    renormalized = base_delta * (1.0 - shift)
    if not 0.0 < renormalized <= delta_max:
        raise OutOfSupportedRange(
            f"Renormalized anisotropy {renormalized} leaves (0, {delta_max}]",
            diagnostics={"base_delta": base_delta, "renormalized": renormalized},
        )
    return renormalized - 1.0


def ferro_free_energy(f_af: float, t: float) -> float:
    """Ferromagnetic free energy from the antiferromagnetic one at temperature -t.

    f_ferro(|Jz|, t) = -f_af(|Jz|, -t); ``f_af`` must already be evaluated at -t.
    """
    if not t > 0.0:
        raise ValueError(f"Temperature must be positive, got {t}")
    return -f_af
