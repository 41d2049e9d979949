"""Integral-equation kernels in both anisotropy regimes.

Conventions: the Fourier transform is ``f^(k) = int f(x) exp(-i k x) dx``, so the
shifted kernel g(x - i s) has transform g^(k) exp(s k). The shifted kernels are
integrable inside a strip whose width equals the decay rate of g^: theta in the
easy-plane regime and 2 phi in the easy-axis regime. The contour shift is
``strip - eps`` with 0 < eps < strip.

The shift is finite, so the two auxiliary functions live on the lines
Im x = +eps/2 (a) and Im x = -eps/2 (abar). The driving term and the
free-energy weight are evaluated on the same lines, c(x + i eps/2) and
c(x - i eps/2); with that pairing the equations do not depend on eps.
"""

from __future__ import annotations

import hashlib
import logging
import math
import struct
import threading
import warnings
from collections import OrderedDict
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from scipy import integrate

from ..config import CalorexConfig, KernelConfig
from ..exceptions import DegenerateRegime, QuadratureFailure, ShiftTooLarge, SlowConvergence
from ..models.chain import AnisotropyPoint, EasyPlane, Regime
from .grid import SolverGrid

logger = logging.getLogger(__name__)

Sign = Literal[1, -1]

SERIES_TAIL_TOL = 1e-14


def _check_theta(theta: float) -> None:
    if not theta > 0.0:
        raise DegenerateRegime(
            "Easy-plane kernels degenerate at theta <= 0 (isotropic point)", {"theta": theta}
        )
    if theta > math.pi / 2 + 1e-15:
        raise DegenerateRegime(
            "Easy-plane kernels are supported for theta <= pi/2", {"theta": theta}
        )


def _check_phi(phi: float) -> None:
    if not phi > 0.0:
        raise DegenerateRegime(
            "Easy-axis kernels degenerate at phi <= 0 (isotropic point)", {"phi": phi}
        )


def strip_width(tag: Regime, parameter: float) -> float:
    """Width of the strip in which the shifted kernel stays integrable."""
    return parameter if tag is Regime.EASY_PLANE else 2.0 * parameter


def contour_shift(tag: Regime, parameter: float, eps: float) -> float:
    """Shift ``strip - eps`` of the off-diagonal kernel.

    Raises:
        ShiftTooLarge: If eps does not lie strictly inside (0, strip).
    """
    strip = strip_width(tag, parameter)
    if not 0.0 < eps < strip:
        raise ShiftTooLarge(
            f"Contour shift parameter eps={eps} must lie in (0, {strip})",
            diagnostics={"regime": str(tag), "strip": strip, "eps": eps, "decay_rate": eps},
        )
    return strip - eps


# -- easy-plane -------------------------------------------------------------------------------


def c_plane(x: float | NDArray, theta: float) -> float | NDArray:
    """Driving kernel c(x) = 1 / (2 theta cosh(pi x / theta))."""
    _check_theta(theta)
    z = np.abs(np.asarray(x, dtype=float)) * (math.pi / theta)
    e = np.exp(-z)
    value = e / (theta * (1.0 + e * e))
    return float(value) if np.ndim(value) == 0 else value


def c_plane_shifted(x: float | NDArray, theta: float, eta: float) -> complex | NDArray:
    """c(x + i eta) for |eta| < theta / 2, where the poles of c sit."""
    _check_theta(theta)
    if not abs(eta) < theta / 2:
        raise ShiftTooLarge(
            f"Driving term has poles at Im x = +-{theta / 2}, got shift {eta}",
            diagnostics={"theta": theta, "eta": eta},
        )
    xa = np.asarray(x, dtype=float)
    # c is even, so c(x + i eta) = c(|x| + i sign(x) eta); Re z >= 0 keeps exp(-z) bounded.
    side = np.where(xa < 0.0, -1.0, 1.0)
    z = (np.abs(xa) + 1j * side * eta) * (math.pi / theta)
    e = np.exp(-z)
    value = e / (theta * (1.0 + e * e))
    return complex(value) if np.ndim(value) == 0 else value


def plane_profile(y: float | NDArray, theta: float, shift: float = 0.0) -> NDArray:
    """F(|y|) exp(shift |y|) for the Fourier integrand of g.

    F(y) = sinh((pi - 2 theta) y / 2) / (cosh(theta y / 2) sinh((pi - theta) y / 2)),
    written with decaying exponentials only.
    """
    y = np.abs(np.asarray(y, dtype=float))
    small = y < 1e-300
    ys = np.where(small, 1.0, y)
    ratio = np.expm1(-(math.pi - 2.0 * theta) * ys) / np.expm1(-(math.pi - theta) * ys)
    value = 2.0 * np.exp(-(theta - shift) * ys) * ratio / (1.0 + np.exp(-theta * ys))
    return np.where(small, (math.pi - 2.0 * theta) / (math.pi - theta), value)


@dataclass(frozen=True, slots=True)
class FourierQuadrature:
    """Result of one Fourier-integral evaluation.

    Attributes:
        value: Integral value.
        abserr: Error estimate reported by QUADPACK.
        cutoff: Truncation point of the y-integral (inf for the QAWF scheme).
        decay_rate: Exponential decay rate of the integrand envelope.
    """

    value: float
    abserr: float
    cutoff: float
    decay_rate: float


def _fourier_half_line(
    profile: Callable[[float], float],
    omega: float,
    weight: Literal["cos", "sin"],
    decay_rate: float,
    method: Literal["qawf", "truncated"],
    config: KernelConfig,
) -> FourierQuadrature:
    """int_0^inf profile(y) w(omega y) dy by one of two independent QUADPACK schemes."""
    tol = config.quad_abs_tol
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if method == "qawf":
                cutoff = math.inf
                if omega == 0.0:
                    if weight == "sin":
                        return FourierQuadrature(0.0, 0.0, cutoff, decay_rate)
                    value, abserr = integrate.quad(
                        profile, 0.0, np.inf, epsabs=tol, epsrel=tol, limit=config.quad_limit
                    )
                else:
                    value, abserr = integrate.quad(
                        profile,
                        0.0,
                        np.inf,
                        weight=weight,
                        wvar=omega,
                        epsabs=tol,
                        limlst=config.quad_limit,
                    )
            else:
                cutoff = math.log(2.0 / tol) / decay_rate + 1.0
                if omega == 0.0:
                    if weight == "sin":
                        return FourierQuadrature(0.0, 0.0, cutoff, decay_rate)
                    value, abserr = integrate.quad(
                        profile, 0.0, cutoff, epsabs=tol, epsrel=tol, limit=config.quad_limit
                    )
                else:
                    value, abserr = integrate.quad(
                        profile,
                        0.0,
                        cutoff,
                        weight=weight,
                        wvar=omega,
                        epsabs=tol,
                        epsrel=tol,
                        limit=config.quad_limit,
                    )
        except integrate.IntegrationWarning as e:
            raise QuadratureFailure(
                f"Fourier quadrature did not converge: {e}",
                diagnostics={"omega": omega, "weight": weight, "method": method},
            ) from e
    return FourierQuadrature(float(value), float(abserr), cutoff, decay_rate)


def g_plane_quadrature(
    x: float,
    theta: float,
    *,
    method: Literal["qawf", "truncated"] = "qawf",
    config: KernelConfig | None = None,
) -> FourierQuadrature:
    """g(x) for the easy-plane regime with quadrature metadata."""
    _check_theta(theta)
    config = config or KernelConfig()
    result = _fourier_half_line(
        lambda y: float(plane_profile(y, theta)), abs(x), "cos", theta, method, config
    )
    return FourierQuadrature(
        result.value / (2.0 * math.pi), result.abserr / (2.0 * math.pi), result.cutoff, theta
    )


def g_plane(
    x: float,
    theta: float,
    *,
    method: Literal["qawf", "truncated"] = "qawf",
    config: KernelConfig | None = None,
) -> float:
    """Easy-plane kernel g(x) = (1/4pi) int dy F(y) cos(x y) by adaptive quadrature.

    Raises:
        DegenerateRegime: For theta <= 0.
        QuadratureFailure: If the tolerance is not reached.
    """
    if abs(theta - math.pi / 2) < 1e-15:
        _check_theta(theta)
        return 0.0
    return g_plane_quadrature(x, theta, method=method, config=config).value


def g_plane_shifted(
    x: float,
    theta: float,
    eps: float,
    sign: Sign,
    *,
    method: Literal["qawf", "truncated"] = "qawf",
    config: KernelConfig | None = None,
) -> complex:
    """Easy-plane kernel at x - i sign (theta - eps).

    Real part (1/2pi) int F(y) cosh(s y) cos(x y) dy, imaginary part
    sign (1/2pi) int F(y) sinh(s y) sin(x y) dy, with s = theta - eps.

    Raises:
        ShiftTooLarge: If eps is outside (0, theta).
    """
    _check_theta(theta)
    shift = contour_shift(Regime.EASY_PLANE, theta, eps)
    if abs(theta - math.pi / 2) < 1e-15:
        return 0j
    config = config or KernelConfig()

    def even(y: float) -> float:
        return 0.5 * float(plane_profile(y, theta, shift) + plane_profile(y, theta, -shift))

    def odd(y: float) -> float:
        return 0.5 * float(plane_profile(y, theta, shift) - plane_profile(y, theta, -shift))

    re = _fourier_half_line(even, abs(x), "cos", eps, method, config)
    im = _fourier_half_line(odd, abs(x), "sin", eps, method, config)
    imag = math.copysign(1.0, x) * im.value if x != 0.0 else 0.0
    return complex(re.value, sign * imag) / (2.0 * math.pi)


def plane_multipliers(k: NDArray, theta: float) -> tuple[NDArray, NDArray]:
    """Fourier transforms (c^(k), g^(k)) of the easy-plane kernels."""
    ak = np.abs(k)
    e = np.exp(-0.5 * theta * ak)
    c_hat = e / (1.0 + e * e)
    g_hat = 0.5 * plane_profile(ak, theta)
    return c_hat, g_hat


# -- easy-axis --------------------------------------------------------------------------------


def series_terms(rate: float, config: KernelConfig | None = None) -> int:
    """Terms needed for a series with terms bounded by 2 exp(-n rate).

    Raises:
        SlowConvergence: If more terms than ``series_cap`` are needed.
    """
    config = config or KernelConfig()
    if not rate > 0.0:
        raise SlowConvergence("Series terms do not decay", {"rate": rate})
    bound = 2.0 / (-math.expm1(-rate))
    n_terms = max(1, math.ceil(math.log(bound / SERIES_TAIL_TOL) / rate))
    if n_terms > config.series_cap:
        raise SlowConvergence(
            f"Series needs {n_terms} terms (cap {config.series_cap}); point too close to isotropic",
            diagnostics={"rate": rate, "required": n_terms, "cap": config.series_cap},
        )
    return n_terms


def axis_coefficients(n: NDArray, phi: float) -> tuple[NDArray, NDArray]:
    """Fourier coefficients (c^(n), g^(n)) of the easy-axis kernels."""
    an = np.abs(n)
    e = np.exp(-an * phi)
    c_hat = e / (1.0 + e * e)
    g_hat = e * e / (1.0 + e * e)
    return c_hat, g_hat


def c_axis(x: float | NDArray, phi: float, n_terms: int | None = None) -> float | NDArray:
    """Easy-axis c(x) = (1/2pi)[1/2 + sum_n cos(n x) / cosh(n phi)]."""
    _check_phi(phi)
    n_terms = n_terms or series_terms(phi)
    n = np.arange(1, n_terms + 1)
    coef, _ = axis_coefficients(n, phi)
    xa = np.asarray(x, dtype=float)
    value = (0.5 + 2.0 * np.cos(np.multiply.outer(xa, n)) @ coef) / (2.0 * math.pi)
    return float(value) if np.ndim(value) == 0 else value


def g_axis(x: float | NDArray, phi: float, n_terms: int | None = None) -> float | NDArray:
    """Easy-axis g(x) = (1/2pi)[1/2 + sum_n exp(-n phi) cos(n x) / cosh(n phi)]."""
    _check_phi(phi)
    n_terms = n_terms or series_terms(2.0 * phi)
    n = np.arange(1, n_terms + 1)
    _, coef = axis_coefficients(n, phi)
    xa = np.asarray(x, dtype=float)
    value = (0.5 + 2.0 * np.cos(np.multiply.outer(xa, n)) @ coef) / (2.0 * math.pi)
    return float(value) if np.ndim(value) == 0 else value


def g_axis_shifted(
    x: float, phi: float, eps: float, sign: Sign, n_terms: int | None = None
) -> complex:
    """Easy-axis kernel at x - i sign (2 phi - eps); terms decay like exp(-n eps).

    Raises:
        ShiftTooLarge: If eps is outside (0, 2 phi).
        SlowConvergence: If the shifted series needs too many terms.
    """
    _check_phi(phi)
    shift = contour_shift(Regime.EASY_AXIS, phi, eps)
    n_terms = n_terms or series_terms(eps)
    n = np.arange(1, n_terms + 1, dtype=float)
    denom = 1.0 + np.exp(-2.0 * n * phi)
    grow = np.exp(-n * (2.0 * phi - shift))
    damp = np.exp(-n * (2.0 * phi + shift))
    re = 0.5 + np.sum((grow + damp) / denom * np.cos(n * x))
    im = np.sum((grow - damp) / denom * np.sin(n * x))
    return complex(re, sign * im) / (2.0 * math.pi)


def axis_multipliers(freq: NDArray, phi: float) -> tuple[NDArray, NDArray]:
    """Coefficient arrays on integer frequencies for the periodic FFT grid."""
    return axis_coefficients(freq, phi)


# -- solver tables ----------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class KernelTable:
    """Kernels sampled on a solver grid.

    Attributes:
        regime: Regime tag.
        parameter: theta or phi.
        grid: The solver grid the samples live on.
        eps: Contour shift parameter (the shifted kernels decay like exp(-eps |k|)).
        shift: Imaginary shift strip - eps.
        zero_mode: K = int g dx (also the integral of both shifted kernels).
        c: c(x) on the grid.
        c_up: c(x + i eps/2), driving term and weight of ln(1 + a).
        c_down: c(x - i eps/2), driving term and weight of ln(1 + abar).
        g: g(x) on the grid.
        g_minus: g(x - i shift) on the grid (enters the ln a equation).
        g_plus: g(x + i shift) on the grid (enters the ln abar equation).
        g_hat: Fourier multiplier of g on the convolution frequencies.
        g_hat_minus: Multiplier of g(x - i shift).
        g_hat_plus: Multiplier of g(x + i shift).
    """

    regime: Regime
    parameter: float
    grid: SolverGrid
    eps: float
    shift: float
    zero_mode: float
    c: NDArray
    c_up: NDArray
    c_down: NDArray
    g: NDArray
    g_minus: NDArray
    g_plus: NDArray
    g_hat: NDArray
    g_hat_minus: NDArray
    g_hat_plus: NDArray

    @property
    def key(self) -> str:
        return table_key(self.regime, self.parameter, self.eps, self.grid)

    def _to_array(self) -> NDArray:
        return np.concatenate(
            [
                self.c,
                self.c_up.real,
                self.c_up.imag,
                self.c_down.real,
                self.c_down.imag,
                self.g,
                self.g_minus.real,
                self.g_minus.imag,
                self.g_plus.real,
                self.g_plus.imag,
                self.g_hat,
                self.g_hat_minus,
                self.g_hat_plus,
            ]
        )

    @classmethod
    def _from_array(
        cls,
        data: NDArray,
        regime: Regime,
        parameter: float,
        grid: SolverGrid,
        eps: float,
    ) -> KernelTable:
        n, m = grid.n_points, grid.fft_size
        parts = np.split(data, np.cumsum([n] * 10 + [m] * 2))
        return cls(
            regime=regime,
            parameter=parameter,
            grid=grid,
            eps=eps,
            shift=contour_shift(regime, parameter, eps),
            zero_mode=float(parts[10][0]),
            c=parts[0],
            c_up=parts[1] + 1j * parts[2],
            c_down=parts[3] + 1j * parts[4],
            g=parts[5],
            g_minus=parts[6] + 1j * parts[7],
            g_plus=parts[8] + 1j * parts[9],
            g_hat=parts[10],
            g_hat_minus=parts[11],
            g_hat_plus=parts[12],
        )


def default_eps(point: AnisotropyPoint, config: CalorexConfig) -> float:
    """Contour shift parameter: eps_shift_fraction times theta or phi."""
    return config.nlie.eps_shift_fraction * point.regime.parameter


def table_key(regime: Regime, parameter: float, eps: float, grid: SolverGrid) -> str:
    payload = f"{regime}|{parameter!r}|{eps!r}|{grid.key}"
    return hashlib.sha256(payload.encode()).hexdigest()


def _samples_from_multiplier(multiplier: NDArray, grid: SolverGrid) -> NDArray:
    """Real-space samples on the solver grid of a kernel given by its transform."""
    m = grid.fft_size
    if grid.periodic:
        # x_j = -pi + j h, so exp(i n x_j) carries a (-1)^n phase.
        phase = np.where(grid.frequencies.astype(np.int64) % 2 == 0, 1.0, -1.0)
        return np.fft.ifft(multiplier * phase) * m / (2.0 * math.pi)
    samples = np.fft.ifft(multiplier) / grid.spacing
    index = (np.arange(grid.n_points) - grid.n_points // 2) % m
    return samples[index]


def build_kernel_table(
    point: AnisotropyPoint,
    grid: SolverGrid,
    config: CalorexConfig | None = None,
    eps: float | None = None,
) -> KernelTable:
    """Sample all kernels for ``point`` on ``grid``.

    Tables are temperature independent; they are memoized in-process and, when
    ``kernels.cache_dir`` is set, on disk.

    Raises:
        DegenerateRegime: At the isotropic point.
        ShiftTooLarge: For an eps outside the integrability strip.
    """
    config = config or CalorexConfig()
    if point.tag is not grid.regime:
        raise ValueError(f"Grid regime {grid.regime} does not match point regime {point.tag}")
    parameter = point.regime.parameter
    if isinstance(point.regime, EasyPlane):
        _check_theta(parameter)
    else:
        _check_phi(parameter)
    eps = default_eps(point, config) if eps is None else eps
    shift = contour_shift(point.tag, parameter, eps)
    key = table_key(point.tag, parameter, eps, grid)

    cached = _MEMORY.get(key)
    if cached is not None:
        return cached
    disk = KernelCache(config.kernels.cache_dir) if config.kernels.cache_dir else None
    if disk is not None:
        data = disk.load(key, expected=10 * grid.n_points + 3 * grid.fft_size)
        if data is not None:
            table = KernelTable._from_array(data, point.tag, parameter, grid, eps)
            _MEMORY.put(key, table)
            return table

    freq = grid.frequencies
    eta = 0.5 * eps
    if point.tag is Regime.EASY_PLANE:
        _, g_hat = plane_multipliers(freq, parameter)
        c = np.asarray(c_plane(grid.x, parameter), dtype=float)
        c_up = np.asarray(c_plane_shifted(grid.x, parameter, eta), dtype=complex)
        c_down = np.asarray(c_plane_shifted(grid.x, parameter, -eta), dtype=complex)
    else:
        c_hat, g_hat = axis_multipliers(freq, parameter)
        c = _samples_from_multiplier(c_hat, grid).real
        c_up = _samples_from_multiplier(_shifted_c_axis(freq, parameter, eta), grid)
        c_down = _samples_from_multiplier(_shifted_c_axis(freq, parameter, -eta), grid)
    # g^(k) exp(+-shift k), exponents merged so that large |k| never overflows.
    if point.tag is Regime.EASY_PLANE:
        g_hat_minus = _shifted_plane(freq, parameter, shift)
        g_hat_plus = _shifted_plane(freq, parameter, -shift)
    else:
        g_hat_minus = _shifted_axis(freq, parameter, shift)
        g_hat_plus = _shifted_axis(freq, parameter, -shift)

    table = KernelTable(
        regime=point.tag,
        parameter=parameter,
        grid=grid,
        eps=eps,
        shift=shift,
        zero_mode=float(g_hat[0]),
        c=c,
        c_up=c_up,
        c_down=c_down,
        g=_samples_from_multiplier(g_hat, grid).real,
        g_minus=_samples_from_multiplier(g_hat_minus, grid),
        g_plus=_samples_from_multiplier(g_hat_plus, grid),
        g_hat=g_hat,
        g_hat_minus=g_hat_minus,
        g_hat_plus=g_hat_plus,
    )
    logger.debug(
        "Built %s kernel table (parameter=%.6g, eps=%.3g, n=%d)",
        point.tag,
        parameter,
        eps,
        grid.n_points,
    )
    _MEMORY.put(key, table)
    if disk is not None:
        disk.store(key, table._to_array())
    return table


def _shifted_plane(k: NDArray, theta: float, shift: float) -> NDArray:
    """g^(k) exp(shift k) with the exponents merged."""
    ak = np.abs(k)
    small = ak < 1e-300
    aks = np.where(small, 1.0, ak)
    ratio = np.expm1(-(math.pi - 2.0 * theta) * aks) / np.expm1(-(math.pi - theta) * aks)
    value = np.exp(-theta * aks + shift * k) * ratio / (1.0 + np.exp(-theta * aks))
    return np.where(small, 0.5 * (math.pi - 2.0 * theta) / (math.pi - theta), value)


def _shifted_axis(n: NDArray, phi: float, shift: float) -> NDArray:
    an = np.abs(n)
    return np.exp(-2.0 * an * phi + shift * n) / (1.0 + np.exp(-2.0 * an * phi))


def _shifted_c_axis(n: NDArray, phi: float, eta: float) -> NDArray:
    """Coefficients of c(x + i eta), c^(n) exp(-n eta)."""
    an = np.abs(n)
    return np.exp(-an * phi - eta * n) / (1.0 + np.exp(-2.0 * an * phi))


class _TableMemo:
    """Small thread-safe LRU of kernel tables."""

    def __init__(self, capacity: int = 32) -> None:
        self._capacity = capacity
        self._items: OrderedDict[str, KernelTable] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: str) -> KernelTable | None:
        with self._lock:
            table = self._items.get(key)
            if table is not None:
                self._items.move_to_end(key)
            return table

    def put(self, key: str, table: KernelTable) -> None:
        with self._lock:
            self._items[key] = table
            self._items.move_to_end(key)
            while len(self._items) > self._capacity:
                self._items.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._items.clear()


_MEMORY = _TableMemo()


def clear_kernel_memo() -> None:
    """Drop all in-process kernel tables."""
    _MEMORY.clear()


class KernelCache:
    """On-disk kernel cache.

    File layout: magic ``b"CLXK"``, uint32 format version, uint64 value count, then
    the values as little-endian float64. Files written by other versions are ignored.
    """

    MAGIC = b"CLXK"
    VERSION = 2
    _HEADER = struct.Struct("<4sIQ")

    def __init__(self, directory: str | Path) -> None:
        self._directory = Path(directory).expanduser()

    def path(self, key: str) -> Path:
        return self._directory / f"{key}.clxk"

    def store(self, key: str, values: NDArray) -> Path:
        self._directory.mkdir(parents=True, exist_ok=True)
        data = np.ascontiguousarray(values, dtype="<f8")
        path = self.path(key)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(self._HEADER.pack(self.MAGIC, self.VERSION, data.size))
            fh.write(data.tobytes())
        tmp.replace(path)
        return path

    def load(self, key: str, expected: int | None = None) -> NDArray | None:
        path = self.path(key)
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            return None
        if len(raw) < self._HEADER.size:
            return None
        magic, version, count = self._HEADER.unpack_from(raw)
        if magic != self.MAGIC or version != self.VERSION:
            logger.debug("Ignoring kernel cache file %s (version %s)", path, version)
            return None
        if expected is not None and count != expected:
            return None
        values = np.frombuffer(raw, dtype="<f8", count=count, offset=self._HEADER.size)
        logger.debug("Kernel cache hit %s", path.name)
        return values.astype(float)
