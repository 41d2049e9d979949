"""Free energy, entropy and their derivatives from the auxiliary functions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit

from ..config import CalorexConfig
from ..exceptions import (
    ComplexResidue,
    NonConvergence,
    StencilCrossesCriticalPoint,
    VanishingHeatCapacity,
)
from ..models.chain import (
    AnisotropyPoint,
    ExternalConditions,
    classify,
    classify_d,
    ferro_free_energy,
)
from ..models.thermo import JumpLimits, StencilInfo, StencilKind, ThermoPoint, VelocityVerdict
from .grid import SolverGrid, build_grid
from .kernels import KernelTable, build_kernel_table
from .nlie import AuxFunctions, driving_amplitude, equations_for, solve

logger = logging.getLogger(__name__)

IMAG_WARN = 1e-10
IMAG_FAIL = 1e-8
LINEAR_ABS_TOL = 1e-10


@dataclass(frozen=True)
class DerivFunctions:
    """Temperature derivatives A = d ln a/dt and Abar = d ln abar/dt on the grid.

    Attributes:
        A: d ln a / dt.
        A_bar: d ln abar / dt.
        residual: Sup-norm defect of the linear equations.
        iterations: Iterations of the linear solve.
    """

    A: NDArray
    A_bar: NDArray
    residual: float
    iterations: int


@dataclass(frozen=True)
class PointState:
    """Solved equations at one (d, t, h) with the derived scalars."""

    aux: AuxFunctions
    deriv: DerivFunctions
    kernels: KernelTable
    f_rel: float
    entropy: float

    @property
    def grid(self) -> SolverGrid:
        return self.kernels.grid


def _real(value: complex, what: str, context: dict) -> float:
    imag = abs(complex(value).imag)
    if imag > IMAG_FAIL:
        raise ComplexResidue(
            f"{what} has imaginary part {imag:.3g}",
            diagnostics={**context, "imag": imag, "tolerance": IMAG_FAIL},
        )
    if imag > IMAG_WARN:
        logger.warning("Discarding imaginary part %.3g of %s at %s", imag, what, context)
    return float(complex(value).real)


def free_energy_rel(aux: AuxFunctions, grid: SolverGrid, kernels: KernelTable) -> float:
    """f - e0 = -t int [c(x + i eps/2) ln(1 + a) + c(x - i eps/2) ln(1 + abar)] dx.

    On the real axis this is -t int c ln[(1 + a)(1 + abar)]; the auxiliary
    functions live on the shifted lines, and so does the weight.

    Raises:
        ComplexResidue: If the integral keeps an imaginary part above 1e-8.
    """
    integrand = kernels.c_up * aux.log1p_a() + kernels.c_down * aux.log1p_abar()
    value = -aux.t_eff * grid.integrate(integrand)
    return _real(value, "free energy", aux.params)


def deriv_t(
    aux: AuxFunctions,
    grid: SolverGrid,
    kernels: KernelTable,
    config: CalorexConfig | None = None,
) -> DerivFunctions:
    """Solve the linear equations for the temperature derivatives of ln a and ln abar.

    Differentiating the nonlinear equations in t gives::

        A    = D c+/t^2 - h(1 - K)/t^2 + g * (fa A)    - g(. - i s) * (fb Abar)
        Abar = D c-/t^2 + h(1 - K)/t^2 + g * (fb Abar) - g(. + i s) * (fa A)

    with fa = a/(1 + a) and fb = abar/(1 + abar). The linear map is iterated with
    the same damping as the nonlinear one.

    Raises:
        NonConvergence: If the linear iteration exceeds ``nlie.max_iter``.
    """
    config = config or CalorexConfig()
    t = aux.t_eff
    eqs = equations_for(aux.point, t, aux.h, kernels)
    amplitude = driving_amplitude(aux.point)
    drive_a = amplitude * kernels.c_up / t**2
    drive_b = amplitude * kernels.c_down / t**2
    field_term = aux.h * (1.0 - kernels.zero_mode) / t**2
    fa = aux.fermi_a()
    fb = aux.fermi_abar()
    if grid.periodic:
        asym_a = asym_b = 0.0
    else:
        # Far field: A = -h/t^2, Abar = h/t^2 with Fermi factors expit(+-h/t).
        asym_a = float(expit(aux.h / t)) * (-aux.h / t**2)
        asym_b = float(expit(-aux.h / t)) * (aux.h / t**2)
    const = kernels.zero_mode * (asym_a - asym_b)

    def rhs(a_val: NDArray, b_val: NDArray) -> tuple[NDArray, NDArray]:
        conv_a, conv_b = eqs.convolve(fa * a_val - asym_a, fb * b_val - asym_b)
        return drive_a - field_term + const + conv_a, drive_b + field_term - const + conv_b

    lam = config.nlie.damping
    a_val, b_val = drive_a - field_term, drive_b + field_term
    defect = math.inf
    for iteration in range(1, config.nlie.max_iter + 1):
        new_a, new_b = rhs(a_val, b_val)
        defect = float(max(np.max(np.abs(new_a - a_val)), np.max(np.abs(new_b - b_val))))
        scale = float(max(np.max(np.abs(new_a)), np.max(np.abs(new_b)), 1.0))
        if not math.isfinite(defect):
            break
        if defect < max(LINEAR_ABS_TOL, 1e-14 * scale):
            return DerivFunctions(A=new_a, A_bar=new_b, residual=defect, iterations=iteration)
        a_val = (1.0 - lam) * a_val + lam * new_a
        b_val = (1.0 - lam) * b_val + lam * new_b
    raise NonConvergence(
        f"Temperature-derivative equations did not converge (defect {defect:.3g})",
        diagnostics={**aux.params, "defect": defect},
    )


def entropy(
    aux: AuxFunctions, deriv: DerivFunctions, grid: SolverGrid, kernels: KernelTable
) -> float:
    """S = int c ln[(1 + a)(1 + abar)] + t int c [fa A + fb Abar], with c+- as in f."""
    t = aux.t_eff
    up = kernels.c_up * (aux.log1p_a() + t * aux.fermi_a() * deriv.A)
    down = kernels.c_down * (aux.log1p_abar() + t * aux.fermi_abar() * deriv.A_bar)
    value = grid.integrate(up + down)
    return _real(value, "entropy", aux.params)


def evaluate(
    point: AnisotropyPoint,
    t: float,
    h: float = 0.0,
    config: CalorexConfig | None = None,
    *,
    grid: SolverGrid | None = None,
    initial: AuxFunctions | None = None,
) -> PointState:
    """Solve at (point, t, h) and compute f_rel and the analytic entropy."""
    config = config or CalorexConfig()
    grid = grid or build_grid(point, t, config)
    kernels = build_kernel_table(point, grid, config)
    aux = solve(point, ExternalConditions(t=t, h=h), grid, kernels, config, initial=initial)
    deriv = deriv_t(aux, grid, kernels, config)
    return PointState(
        aux=aux,
        deriv=deriv,
        kernels=kernels,
        f_rel=free_energy_rel(aux, grid, kernels),
        entropy=entropy(aux, deriv, grid, kernels),
    )


def entropy_at(d: float, t: float, h: float = 0.0, config: CalorexConfig | None = None) -> float:
    """S(d, t, h) in one call."""
    config = config or CalorexConfig()
    return evaluate(classify_d(d, config.model.delta_max), t, h, config).entropy


def _richardson(coarse: float, fine: float) -> float:
    return (4.0 * fine - coarse) / 3.0


def specific_heat(
    point: AnisotropyPoint,
    t: float,
    h: float = 0.0,
    config: CalorexConfig | None = None,
    *,
    grid: SolverGrid | None = None,
    initial: AuxFunctions | None = None,
) -> tuple[float, StencilInfo]:
    """c = t dS/dt by central differences of the analytic entropy.

    The step is ``thermo.dt_fraction * t``; with ``thermo.richardson`` the half
    step is added and one Richardson step removes the O(dt^2) error.
    """
    config = config or CalorexConfig()
    step = config.thermo.dt_fraction * t
    grid = grid or build_grid(point, t - step, config)

    def s_at(temperature: float) -> float:
        return evaluate(point, temperature, h, config, grid=grid, initial=initial).entropy

    def central(delta: float) -> float:
        return (s_at(t + delta) - s_at(t - delta)) / (2.0 * delta)

    slope = central(step)
    if config.thermo.richardson:
        slope = _richardson(slope, central(step / 2.0))
    return t * slope, StencilInfo(StencilKind.CENTRAL, step, config.thermo.richardson)


def _stencil_points(kind: StencilKind, d: float, step: float) -> list[float]:
    if kind is StencilKind.CENTRAL:
        return [d - step, d + step]
    if kind is StencilKind.FORWARD:
        return [d + step, d + 2.0 * step]
    return [d - step, d - 2.0 * step]


def choose_d_stencil(d: float, step: float, config: CalorexConfig) -> StencilKind:
    """Pick a stencil whose points stay on the side of d, at least d_eps from 0.

    Central is preferred; otherwise the one-sided stencil pointing away from the
    isotropic point, then the one pointing towards it.

    Raises:
        StencilCrossesCriticalPoint: If |d| < d_eps or no stencil fits.
    """
    d_eps = config.nlie.d_eps
    if abs(d) < d_eps:
        raise StencilCrossesCriticalPoint(
            f"|d| = {abs(d):.3g} is closer to the isotropic point than d_eps = {d_eps}",
            diagnostics={"d": d, "step": step, "d_eps": d_eps},
        )
    away = StencilKind.FORWARD if d > 0 else StencilKind.BACKWARD
    toward = StencilKind.BACKWARD if d > 0 else StencilKind.FORWARD
    d_min, d_max = -1.0, config.model.delta_max - 1.0

    def admissible(x: float) -> bool:
        same_side = x * d > 0 and abs(x) >= d_eps * (1.0 - 1e-12)
        return same_side and d_min <= x <= d_max

    for kind in (StencilKind.CENTRAL, away, toward):
        if all(admissible(x) for x in _stencil_points(kind, d, step)):
            return kind
    raise StencilCrossesCriticalPoint(
        f"No finite-difference stencil around d = {d} avoids the isotropic point",
        diagnostics={"d": d, "step": step, "d_eps": d_eps},
    )


def _derivative(kind: StencilKind, f0: float, values: list[float], step: float) -> float:
    if kind is StencilKind.CENTRAL:
        return (values[1] - values[0]) / (2.0 * step)
    sign = 1.0 if kind is StencilKind.FORWARD else -1.0
    return sign * (-3.0 * f0 + 4.0 * values[0] - values[1]) / (2.0 * step)


def d_derivatives(
    d: float,
    t: float,
    h: float = 0.0,
    config: CalorexConfig | None = None,
    *,
    center: PointState | None = None,
) -> tuple[float, float, StencilInfo]:
    """alpha_d = dS/dd and nematic_b = -d f_rel/dd at fixed t.

    Step max(thermo.dd_step, 0.05 |d|); Richardson-extrapolated when enabled.

    Raises:
        StencilCrossesCriticalPoint: If the stencil cannot avoid d = 0.
    """
    config = config or CalorexConfig()
    step = max(config.thermo.dd_step, 0.05 * abs(d))
    kind = choose_d_stencil(d, step, config)
    delta_max = config.model.delta_max

    needs_center = kind is not StencilKind.CENTRAL
    if needs_center and center is None:
        center = evaluate(classify_d(d, delta_max), t, h, config)

    def pair(s: float) -> tuple[float, float]:
        states = [
            evaluate(classify_d(x, delta_max), t, h, config) for x in _stencil_points(kind, d, s)
        ]
        f0 = center.f_rel if center is not None else 0.0
        s0 = center.entropy if center is not None else 0.0
        alpha = _derivative(kind, s0, [st.entropy for st in states], s)
        b = -_derivative(kind, f0, [st.f_rel for st in states], s)
        return alpha, b

    alpha, b = pair(step)
    if config.thermo.richardson:
        alpha_half, b_half = pair(step / 2.0)
        alpha, b = _richardson(alpha, alpha_half), _richardson(b, b_half)
    return alpha, b, StencilInfo(kind, step, config.thermo.richardson)


def grueneisen(alpha_d: float, c_d: float) -> float:
    """Gamma_d = alpha_d / c_d.

    Raises:
        VanishingHeatCapacity: If c_d <= 1e-12.
    """
    if not c_d > 1e-12:
        raise VanishingHeatCapacity(
            f"Specific heat {c_d:.3g} too small for the Grueneisen ratio",
            diagnostics={"c_d": c_d, "alpha_d": alpha_d},
        )
    return alpha_d / c_d


def thermo_point(
    d: float, t: float, h: float = 0.0, config: CalorexConfig | None = None
) -> ThermoPoint:
    """All thermodynamic quantities at (d, t, h)."""
    return solve_point(d, t, h, config)[0]


def solve_point(
    d: float,
    t: float,
    h: float = 0.0,
    config: CalorexConfig | None = None,
    *,
    initial: AuxFunctions | None = None,
) -> tuple[ThermoPoint, AuxFunctions]:
    """Like :func:`thermo_point`, warm-started from ``initial`` and also returning
    the converged auxiliary functions for the next point of a sweep."""
    config = config or CalorexConfig()
    point = classify_d(d, config.model.delta_max)
    step = config.thermo.dt_fraction * t
    grid = build_grid(point, t - step, config)
    center = evaluate(point, t, h, config, grid=grid, initial=initial)
    c_d, t_stencil = specific_heat(point, t, h, config, grid=grid, initial=center.aux)
    alpha, b, d_stencil = d_derivatives(d, t, h, config, center=center)

    diagnostics: dict = {
        "residual": center.aux.residual,
        "iterations": center.aux.iterations,
        "deriv_residual": center.deriv.residual,
        "n_points": grid.n_points,
        "half_width": grid.half_width,
        "eps": center.aux.eps,
        "t_stencil": t_stencil._to_dict(),
        "d_stencil": d_stencil._to_dict(),
    }
    try:
        gamma: float | None = grueneisen(alpha, c_d)
    except VanishingHeatCapacity as e:
        gamma = None
        diagnostics["gamma"] = str(e)
    record = ThermoPoint(
        d=d,
        t=t,
        h=h,
        f_rel=center.f_rel,
        entropy=center.entropy,
        specific_heat=c_d,
        alpha_d=alpha,
        gamma_d=gamma,
        nematic_b=b,
        diagnostics=diagnostics,
    )
    return record, center.aux


def magnetization(
    d: float, t: float, h: float = 0.0, config: CalorexConfig | None = None
) -> float:
    """m = -df/dh by a central difference (smoke-test accuracy)."""
    config = config or CalorexConfig()
    point = classify_d(d, config.model.delta_max)
    grid = build_grid(point, t, config)
    step = 1e-3 * t
    plus = evaluate(point, t, h + step, config, grid=grid).f_rel
    minus = evaluate(point, t, h - step, config, grid=grid).f_rel
    return -(plus - minus) / (2.0 * step)


def ferro_free_energy_shifted(
    delta: float, t: float, config: CalorexConfig | None = None
) -> float:
    """Ferromagnetic free energy at |Jz|/J = delta, shifted by the antiferromagnetic e0.

    Solves the antiferromagnetic equations at temperature -t and applies
    f_ferro(t) = -f_af(-t). Since e0 is not computed the result is f_ferro + e0.
    """
    config = config or CalorexConfig()
    point = classify(delta, config.model.delta_max)
    grid = build_grid(point, t, config)
    kernels = build_kernel_table(point, grid, config)
    aux = solve(point, ExternalConditions(t=t), grid, kernels, config, negate_driving=True)
    return ferro_free_energy(free_energy_rel(aux, grid, kernels), t)


def velocity_verdict(
    config: CalorexConfig | None = None, theta: float = math.pi / 2, t: float = 0.02
) -> VelocityVerdict:
    """Compare the low-t entropy slope with both velocity conventions.

    The slope is measured by a secant between t/2 and t, where S = pi t / (3 v)
    up to O(t^3).
    """
    config = config or CalorexConfig()
    delta = math.cos(theta)
    point = classify_d(delta - 1.0, config.model.delta_max)
    grid = build_grid(point, t / 2.0, config)
    s_low = evaluate(point, t / 2.0, 0.0, config, grid=grid).entropy
    s_high = evaluate(point, t, 0.0, config, grid=grid).entropy
    measured = (s_high - s_low) / (t / 2.0)
    v_standard = math.pi * math.sin(theta) / theta
    v_alt = 0.5 * v_standard
    slope_standard = math.pi / (3.0 * v_standard)
    slope_alt = math.pi / (3.0 * v_alt)
    verdict = (
        "standard" if abs(measured - slope_standard) <= abs(measured - slope_alt) else "alternative"
    )
    logger.warning(
        "Velocity convention at theta=%.4g: measured slope %.6g, standard %.6g, "
        "alternative %.6g -> %s",
        theta,
        measured,
        slope_standard,
        slope_alt,
        verdict,
    )
    return VelocityVerdict(
        theta=theta,
        measured_slope=measured,
        slope_standard=slope_standard,
        slope_alternative=slope_alt,
        verdict=verdict,
    )


def jump_limits(t: float, config: CalorexConfig | None = None) -> JumpLimits:
    """S on both sides of d = 0 at d_eps and d_eps/2."""
    config = config or CalorexConfig()
    d_eps = config.nlie.d_eps
    values = [entropy_at(d, t, 0.0, config) for d in (-d_eps, d_eps, -d_eps / 2, d_eps / 2)]
    return JumpLimits(
        t=t,
        d_eps=d_eps,
        s_minus=values[0],
        s_plus=values[1],
        s_minus_half=values[2],
        s_plus_half=values[3],
    )


def gamma_at(d: float, t: float, h: float = 0.0, config: CalorexConfig | None = None) -> float:
    """Grueneisen ratio Gamma_d(d, t) from the specific heat and alpha_d.

    Raises:
        StencilCrossesCriticalPoint: If |d| < d_eps.
        VanishingHeatCapacity: If c_d vanishes.
    """
    config = config or CalorexConfig()
    point = classify_d(d, config.model.delta_max)
    step = config.thermo.dt_fraction * t
    grid = build_grid(point, t - step, config)
    center = evaluate(point, t, h, config, grid=grid)
    c_d, _ = specific_heat(point, t, h, config, grid=grid, initial=center.aux)
    alpha, _, _ = d_derivatives(d, t, h, config, center=center)
    return grueneisen(alpha, c_d)
