"""Damped fixed-point solution of the coupled integral equations for ln a and ln abar.

With D = 2 pi sin(theta) (easy-plane) or 4 pi sinh(phi) (easy-axis) and
c+- = c(x +- i eps/2), the equations read::

    ln a    = -D c+ / t + (h/t)(1 - K) + g * ln(1 + a)    - g(. - i s) * ln(1 + abar)
    ln abar = -D c- / t - (h/t)(1 - K) + g * ln(1 + abar) - g(. + i s) * ln(1 + a)

where ``*`` is convolution over the real line (easy-plane) or over [-pi, pi)
(easy-axis), K = int g and s is the contour shift. Far from the origin the
solution tends to ln a = h/t, ln abar = -h/t. On the real line these constants
are subtracted before the FFT convolution and their contribution K * const is
added back exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy import signal

from ..config import CalorexConfig
from ..exceptions import NonConvergence
from ..models.chain import SOLVER_ENERGY_SCALE, AnisotropyPoint, ExternalConditions, Regime
from .grid import SolverGrid, build_grid, check_point
from .kernels import KernelTable, build_kernel_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuxFunctions:
    """Converged auxiliary functions on a grid.

    Attributes:
        point: Anisotropy point solved at.
        t: Temperature (positive; see ``negated``).
        h: Magnetic field.
        ln_a: ln a(x) on the grid.
        ln_abar: ln abar(x) on the grid.
        residual: Sup-norm defect of the last iterate.
        iterations: Number of iterations performed.
        eps: Contour shift parameter of the kernels used.
        grid: The grid the functions live on.
        negated: Equations were solved at temperature -t.
        residual_history: Defect after every iteration.
    """

    point: AnisotropyPoint
    t: float
    h: float
    ln_a: NDArray
    ln_abar: NDArray
    residual: float
    iterations: int
    eps: float
    grid: SolverGrid = field(repr=False)
    negated: bool = False
    residual_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def grid_key(self) -> str:
        return self.grid.key

    @property
    def t_eff(self) -> float:
        """Temperature entering the equations."""
        return -self.t if self.negated else self.t

    @property
    def params(self) -> dict:
        return {
            "delta": self.point.delta,
            "t": self.t,
            "h": self.h,
            "eps": self.eps,
            "grid": self.grid_key,
        }

    def log1p_a(self) -> NDArray:
        return log1pexp(self.ln_a)

    def log1p_abar(self) -> NDArray:
        return log1pexp(self.ln_abar)

    def fermi_a(self) -> NDArray:
        """a / (1 + a)."""
        return fermi(self.ln_a)

    def fermi_abar(self) -> NDArray:
        return fermi(self.ln_abar)


def log1pexp(z: NDArray) -> NDArray:
    """ln(1 + exp(z)) for complex z without overflow."""
    z = np.asarray(z, dtype=complex)
    positive = z.real > 0.0
    out = np.empty_like(z)
    out[positive] = z[positive] + np.log1p(np.exp(-z[positive]))
    out[~positive] = np.log1p(np.exp(z[~positive]))
    return out


def fermi(z: NDArray) -> NDArray:
    """exp(z) / (1 + exp(z)) for complex z without overflow."""
    z = np.asarray(z, dtype=complex)
    positive = z.real > 0.0
    out = np.empty_like(z)
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    e = np.exp(z[~positive])
    out[~positive] = e / (1.0 + e)
    return out


def driving_amplitude(point: AnisotropyPoint) -> float:
    """Prefactor 2 pi sin(theta) or 4 pi sinh(phi) of c in the driving term.

    Both put the energies at ``SOLVER_ENERGY_SCALE`` times those of the spin
    Hamiltonian with J = 1; the bare easy-axis form 2 pi sinh(phi) is at J = 1.
    """
    if point.tag is Regime.EASY_PLANE:
        return 2.0 * math.pi * math.sin(point.regime.parameter)
    return 2.0 * math.pi * SOLVER_ENERGY_SCALE * math.sinh(point.regime.parameter)


@dataclass(frozen=True)
class Equations:
    """Everything the iteration needs, fixed for one (point, t, h)."""

    table: KernelTable
    driving_a: NDArray
    driving_b: NDArray
    field_term: float
    asym_a: complex
    asym_b: complex

    @property
    def grid(self) -> SolverGrid:
        return self.table.grid

    def convolve(self, u: NDArray, v: NDArray) -> tuple[NDArray, NDArray]:
        """(g * u - g_minus * v, g * v - g_plus * u) by padded FFT."""
        grid, table = self.grid, self.table
        m, n = grid.fft_size, grid.n_points
        fu = np.fft.fft(u, n=m)
        fv = np.fft.fft(v, n=m)
        first = np.fft.ifft(fu * table.g_hat - fv * table.g_hat_minus)[:n]
        second = np.fft.ifft(fv * table.g_hat - fu * table.g_hat_plus)[:n]
        return first, second

    def rhs(self, ln_a: NDArray, ln_abar: NDArray) -> tuple[NDArray, NDArray]:
        la = log1pexp(ln_a) - self.asym_a
        lb = log1pexp(ln_abar) - self.asym_b
        conv_a, conv_b = self.convolve(la, lb)
        k = self.table.zero_mode
        const = k * (self.asym_a - self.asym_b)
        new_a = self.driving_a + self.field_term + const + conv_a
        new_b = self.driving_b - self.field_term - const + conv_b
        return new_a, new_b


def equations_for(
    point: AnisotropyPoint, t_eff: float, h: float, table: KernelTable
) -> Equations:
    grid = table.grid
    amplitude = driving_amplitude(point)
    field_term = h * (1.0 - table.zero_mode) / t_eff
    if grid.periodic:
        asym_a = asym_b = 0j
    else:
        asym_a = complex(np.logaddexp(0.0, h / t_eff))
        asym_b = complex(np.logaddexp(0.0, -h / t_eff))
    return Equations(
        table=table,
        driving_a=-amplitude * table.c_up / t_eff,
        driving_b=-amplitude * table.c_down / t_eff,
        field_term=field_term,
        asym_a=asym_a,
        asym_b=asym_b,
    )


def prepare(
    point: AnisotropyPoint, t_min: float, config: CalorexConfig | None = None
) -> tuple[SolverGrid, KernelTable]:
    """Grid and kernel table for ``point`` usable down to ``t_min``."""
    config = config or CalorexConfig()
    grid = build_grid(point, t_min, config)
    return grid, build_kernel_table(point, grid, config)


def _initial_guess(
    eqs: Equations, t_eff: float, h: float, initial: AuxFunctions | None
) -> tuple[NDArray, NDArray]:
    grid = eqs.grid
    if initial is None or initial.grid.periodic != grid.periodic:
        return eqs.driving_a + h / t_eff, eqs.driving_b - h / t_eff
    scale = initial.t_eff / t_eff
    if initial.grid_key == grid.key:
        return initial.ln_a * scale, initial.ln_abar * scale
    # Outside the old domain np.interp holds the edge values, which are the asymptotes.
    period = 2.0 * math.pi if grid.periodic else None
    ln_a = np.interp(grid.x, initial.grid.x, initial.ln_a, period=period)
    ln_abar = np.interp(grid.x, initial.grid.x, initial.ln_abar, period=period)
    return ln_a * scale, ln_abar * scale


def solve(
    point: AnisotropyPoint,
    cond: ExternalConditions,
    grid: SolverGrid | None = None,
    kernels: KernelTable | None = None,
    config: CalorexConfig | None = None,
    *,
    initial: AuxFunctions | None = None,
    negate_driving: bool = False,
) -> AuxFunctions:
    """Solve the integral equations at ``point`` and ``cond``.

    The iteration starts from the driving term (or from ``initial`` when it lives
    on the same grid) and stops when the sup-norm defect drops below
    ``nlie.tol``. With ``negate_driving`` the equations are solved at temperature
    -t, which is how the ferromagnetic branch is reached.

    Raises:
        DegenerateRegime: If |d| < nlie.d_floor.
        NonConvergence: If the defect is still above tolerance after nlie.max_iter
            iterations, or the iterate stops being finite.
    """
    config = config or CalorexConfig()
    check_point(point, config)
    if kernels is None:
        grid = grid or build_grid(point, cond.t, config)
        kernels = build_kernel_table(point, grid, config)
    elif grid is not None and grid.key != kernels.grid.key:
        raise ValueError("Kernel table was built on a different grid")
    grid = kernels.grid

    t_eff = -cond.t if negate_driving else cond.t
    eqs = equations_for(point, t_eff, cond.h, kernels)
    ln_a, ln_abar = _initial_guess(eqs, t_eff, cond.h, initial if config.nlie.warm_start else None)

    nlie = config.nlie
    lam = nlie.damping
    history: list[float] = []
    defect = math.inf
    for iteration in range(1, nlie.max_iter + 1):
        new_a, new_b = eqs.rhs(ln_a, ln_abar)
        defect = float(max(np.max(np.abs(new_a - ln_a)), np.max(np.abs(new_b - ln_abar))))
        history.append(defect)
        if not math.isfinite(defect):
            raise NonConvergence(
                "Iteration produced non-finite values",
                diagnostics={"d": point.d, "t": cond.t, "h": cond.h, "iteration": iteration},
                residual_history=history,
            )
        if defect < nlie.tol:
            ln_a, ln_abar = new_a, new_b
            break
        ln_a = (1.0 - lam) * ln_a + lam * new_a
        ln_abar = (1.0 - lam) * ln_abar + lam * new_b
    else:
        raise NonConvergence(
            f"No convergence after {nlie.max_iter} iterations (defect {defect:.3g})",
            diagnostics={
                "d": point.d,
                "t": cond.t,
                "h": cond.h,
                "defect": defect,
                "n_points": grid.n_points,
                "damping": lam,
            },
            residual_history=history,
        )

    logger.debug(
        "Solved d=%.6g t=%.6g h=%.3g in %d iterations (defect %.2e, n=%d)",
        point.d,
        cond.t,
        cond.h,
        iteration,
        defect,
        grid.n_points,
    )
    return AuxFunctions(
        point=point,
        t=cond.t,
        h=cond.h,
        ln_a=ln_a,
        ln_abar=ln_abar,
        residual=defect,
        iterations=iteration,
        eps=kernels.eps,
        grid=grid,
        negated=negate_driving,
        residual_history=tuple(history),
    )


def kernel_lags(multiplier: NDArray, grid: SolverGrid) -> NDArray:
    """Kernel samples at lags -M/2 .. M/2 - 1 times the spacing."""
    m = grid.fft_size
    samples = np.fft.ifft(multiplier)
    if grid.periodic:
        samples = samples * m / (2.0 * math.pi)
    else:
        samples = samples / grid.spacing
    return np.fft.fftshift(samples)


def direct_convolution(u: NDArray, lags: NDArray, grid: SolverGrid) -> NDArray:
    """Riemann sum of int k(x - y) u(y) dy from lag samples, by linear convolution."""
    n = grid.n_points
    if grid.periodic:
        full = signal.fftconvolve(np.concatenate([u, u, u]), lags)
        start = n + n // 2
    else:
        full = signal.fftconvolve(u, lags)
        start = grid.fft_size // 2
    return full[start : start + n] * grid.spacing


def residual(aux: AuxFunctions, grid: SolverGrid, kernels: KernelTable) -> float:
    """Sup-norm defect of both equations, recomputed by direct linear convolution."""
    if aux.grid_key != grid.key or kernels.grid.key != grid.key:
        raise ValueError("Auxiliary functions, grid and kernels must share one grid")
    eqs = equations_for(aux.point, aux.t_eff, aux.h, kernels)
    la = log1pexp(aux.ln_a) - eqs.asym_a
    lb = log1pexp(aux.ln_abar) - eqs.asym_b
    g = kernel_lags(kernels.g_hat, grid)
    g_minus = kernel_lags(kernels.g_hat_minus, grid)
    g_plus = kernel_lags(kernels.g_hat_plus, grid)
    const = kernels.zero_mode * (eqs.asym_a - eqs.asym_b)
    rhs_a = (
        eqs.driving_a
        + eqs.field_term
        + const
        + direct_convolution(la, g, grid)
        - direct_convolution(lb, g_minus, grid)
    )
    rhs_b = (
        eqs.driving_b
        - eqs.field_term
        - const
        + direct_convolution(lb, g, grid)
        - direct_convolution(la, g_plus, grid)
    )
    return float(max(np.max(np.abs(rhs_a - aux.ln_a)), np.max(np.abs(rhs_b - aux.ln_abar))))
