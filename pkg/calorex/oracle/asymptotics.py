"""Low-temperature asymptotic forms of the free energy.

The gapped and isotropic forms are written for unit exchange; a chain with
exchange J obeys f_J(t) = J f_1(t / J), which is how ``energy_scale`` enters.
The gapless velocity v = pi sin(theta) / theta is already in the convention of
the integral equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from ..exceptions import QuadratureFailure, RegimeViolation
from ..models.chain import SOLVER_ENERGY_SCALE
from ..solver.elliptic import EllipticSet, elliptic_from_phi

VALIDITY_FRACTION = 0.5


@dataclass(frozen=True, slots=True)
class GaplessAsymptote:
    """f - e0 = -pi t^2 / (6 v) for two velocity conventions.

    Attributes:
        theta: Anisotropy angle.
        t: Temperature.
        v: pi sin(theta) / theta.
        v_alt: (pi/2) sin(theta) / theta.
        f_rel: Free energy with v.
        f_rel_alt: Free energy with v_alt.
    """

    theta: float
    t: float
    v: float
    v_alt: float
    f_rel: float
    f_rel_alt: float

    @property
    def entropy(self) -> float:
        """S = pi t / (3 v)."""
        return math.pi * self.t / (3.0 * self.v)

    @property
    def entropy_alt(self) -> float:
        return math.pi * self.t / (3.0 * self.v_alt)


def velocity(theta: float) -> float:
    """Velocity of the gapless excitations, pi sin(theta) / theta (pi at theta -> 0)."""
    if theta == 0.0:
        return math.pi
    return math.pi * math.sin(theta) / theta


def asymptote_gapless(theta: float, t: float) -> GaplessAsymptote:
    """Leading low-temperature free energy of the easy-plane chain."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    v = velocity(theta)
    v_alt = 0.5 * v
    return GaplessAsymptote(
        theta=theta,
        t=t,
        v=v,
        v_alt=v_alt,
        f_rel=-math.pi * t * t / (6.0 * v),
        f_rel_alt=-math.pi * t * t / (6.0 * v_alt),
    )


def _check_regime(t: float, gap: float) -> None:
    if t > VALIDITY_FRACTION * gap:
        raise RegimeViolation(
            f"t = {t} is not small against the gap {gap:.4g}",
            diagnostics={"t": t, "gap": gap, "fraction": VALIDITY_FRACTION},
        )


@dataclass(frozen=True, slots=True)
class GappedAsymptote:
    """Two-term gapped expansion.

    Attributes:
        f_rel: Free energy minus e0.
        leading: -exp(-B/t) sqrt(A) t^(3/2).
        correction: Second term of the bracket (with its sign).
        elliptic: Elliptic quantities used.
    """

    f_rel: float
    leading: float
    correction: float
    elliptic: EllipticSet

    @property
    def terms_ratio(self) -> float:
        """|second term / first term|; the expansion is only useful well below 1."""
        return abs(self.correction / self.leading)


def asymptote_gapped_af(
    phi: float, t: float, energy_scale: float = SOLVER_ENERGY_SCALE
) -> GappedAsymptote:
    """Easy-axis antiferromagnet below the gap B:

        f - e0 = -exp(-B/t) [sqrt(A) t^1.5 - (k^2+k+1) / (4 pi (1-k)^2) A^1.5 t^2.5].

    A and B carry the exchange ``energy_scale`` (J in A = k'/(2 J K k^2 sinh phi),
    B = J K k' sinh(phi) / pi).

    Raises:
        RegimeViolation: If t > 0.5 B.
    """
    es = elliptic_from_phi(phi, energy_scale=energy_scale)
    _check_regime(t, es.gap)
    k, a = es.k, es.gap_amp
    boltzmann = math.exp(-es.gap / t)
    leading = -boltzmann * math.sqrt(a) * t**1.5
    coefficient = (k * k + k + 1.0) / (4.0 * math.pi * (1.0 - k) ** 2)
    correction = boltzmann * coefficient * a**1.5 * t**2.5
    return GappedAsymptote(
        f_rel=leading + correction, leading=leading, correction=correction, elliptic=es
    )


def ferro_gap(delta: float) -> float:
    """Gap |1 - Delta| of the easy-axis ferromagnet."""
    return abs(1.0 - delta)


def asymptote_gapped_ferro(
    delta: float, t: float, energy_scale: float = SOLVER_ENERGY_SCALE
) -> float:
    """Easy-axis ferromagnet: f = -(t^1.5 / sqrt(2 pi)) exp(-gap / t) in units of J.

    Raises:
        RegimeViolation: If t > 0.5 gap.
    """
    gap = ferro_gap(delta) * energy_scale
    _check_regime(t, gap)
    tau = t / energy_scale
    return -energy_scale * tau**1.5 / math.sqrt(2.0 * math.pi) * math.exp(-gap / t)


def isotropic_correction(t: float, energy_scale: float = SOLVER_ENERGY_SCALE) -> float:
    """1 + 3 / (8 ln^3(pi / tau)) with tau = t / J."""
    return 1.0 + 3.0 / (8.0 * math.log(math.pi * energy_scale / t) ** 3)


def asymptote_isotropic(t: float, energy_scale: float = SOLVER_ENERGY_SCALE) -> float:
    """Isotropic antiferromagnet: f - e0 = -(pi t^2 / (6 v)) times the log correction."""
    if not 0.0 < t < math.pi * energy_scale:
        raise RegimeViolation(
            f"Logarithmic form needs t < pi J, got {t}", diagnostics={"t": t}
        )
    v = 0.5 * math.pi * energy_scale
    return -math.pi * t * t / (6.0 * v) * isotropic_correction(t, energy_scale)


@dataclass(frozen=True, slots=True)
class SpinonGas:
    """Free energy of a dilute gas of gapped spinons.

    Attributes:
        f_rel: -(2t/pi) int_0^(pi/2) exp(-eps(p)/t) dp.
        leading: Its parabolic-band limit -2 sqrt(A) t^(3/2) exp(-B/t).
        elliptic: Elliptic quantities used.
    """

    f_rel: float
    leading: float
    elliptic: EllipticSet


def spinon_energy(p: float, es: EllipticSet) -> float:
    """eps(p) - B with eps(p) = (B/k') sqrt(1 - k^2 cos^2 p)."""
    s2 = es.k * es.k * math.sin(p) ** 2
    band = es.gap / es.k_prime
    return band * s2 / (math.sqrt(es.k_prime**2 + s2) + es.k_prime)


def asymptote_spinon_gas(
    phi: float, t: float, energy_scale: float = SOLVER_ENERGY_SCALE
) -> SpinonGas:
    """Easy-axis antiferromagnet to first order in exp(-B/t).

    Two spinon species, each with momenta in a zone of width pi and the
    dispersion eps(p) = (B/k') sqrt(1 - k^2 cos^2 p), give
    f - e0 = -2t int_(-pi/2)^(pi/2) (dp / 2pi) exp(-eps(p)/t). Expanding the
    band to second order around p = 0 reproduces -2 sqrt(A) t^(3/2) exp(-B/t),
    which is twice the first term of ``asymptote_gapped_af``. The second term
    of that series is not the band correction and exceeds the first at t = 0.05
    for Delta = 2.

    Raises:
        RegimeViolation: If t > 0.5 B.
        QuadratureFailure: If the band integral does not converge.
    """
    es = elliptic_from_phi(phi, energy_scale=energy_scale)
    _check_regime(t, es.gap)
    value, abserr = integrate.quad(
        lambda p: math.exp(-spinon_energy(p, es) / t),
        0.0,
        0.5 * math.pi,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    if not abserr <= 1e-9 * value:
        raise QuadratureFailure(
            "Spinon band integral did not converge",
            diagnostics={"phi": phi, "t": t, "value": value, "abserr": abserr},
        )
    boltzmann = math.exp(-es.gap / t)
    return SpinonGas(
        f_rel=-2.0 * t / math.pi * boltzmann * value,
        leading=-2.0 * math.sqrt(es.gap_amp) * t**1.5 * boltzmann,
        elliptic=es,
    )
