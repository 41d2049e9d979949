"""Discretization of the integral equations."""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from ..config import CalorexConfig
from ..exceptions import DegenerateRegime
from ..models.chain import AnisotropyPoint, Regime

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-14


@dataclass(frozen=True)
class SolverGrid:
    """Uniform grid on [-L, L) (real line) or [-pi, pi) (periodic).

    Attributes:
        regime: Regime the grid was built for.
        n_points: Number of grid points (power of two).
        half_width: L, or pi for the periodic grid.
        pad_factor: Zero padding of real-line convolutions.
    """

    regime: Regime
    n_points: int
    half_width: float
    pad_factor: int = 2
    x: NDArray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        j = np.arange(self.n_points) - self.n_points // 2
        object.__setattr__(self, "x", j * self.spacing)

    @property
    def periodic(self) -> bool:
        return self.regime is Regime.EASY_AXIS

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def fft_size(self) -> int:
        """Length of the convolution FFT."""
        return self.n_points if self.periodic else self.n_points * self.pad_factor

    @property
    def frequencies(self) -> NDArray:
        """Angular frequencies of the convolution FFT (integers on the periodic grid)."""
        if self.periodic:
            return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points)
        return 2.0 * math.pi * np.fft.fftfreq(self.fft_size, d=self.spacing)

    @property
    def weights(self) -> float:
        """Quadrature weight of the trapezoidal rule (uniform)."""
        return self.spacing

    @property
    def key(self) -> str:
        payload = f"{self.regime}|{self.n_points}|{self.half_width!r}|{self.pad_factor}"
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def integrate(self, values: NDArray) -> float | complex:
        """Trapezoidal integral over the grid; spectrally accurate for decaying or periodic data."""
        return values.sum() * self.spacing

    def _to_dict(self) -> dict:
        return {
            "regime": str(self.regime),
            "n_points": self.n_points,
            "half_width": self.half_width,
            "spacing": self.spacing,
            "pad_factor": self.pad_factor,
        }


def check_point(point: AnisotropyPoint, config: CalorexConfig) -> None:
    """Refuse points closer to the isotropic point than nlie.d_floor.

    Raises:
        DegenerateRegime: If |d| < nlie.d_floor.
    """
    if abs(point.d) < config.nlie.d_floor:
        raise DegenerateRegime(
            f"|d| = {abs(point.d):.3g} is below d_floor={config.nlie.d_floor}; "
            f"evaluate at d = +-d_eps ({config.nlie.d_eps}) instead",
            diagnostics={
                "d": point.d,
                "d_floor": config.nlie.d_floor,
                "d_eps": config.nlie.d_eps,
            },
        )


def half_width(theta: float, t_min: float) -> float:
    """Truncation L of the real line for which the driving term drops below 1e-14.

    The deviation of ln(1 + a) from its asymptote decays like exp(-r |x|) with
    r = min(pi/theta, 2pi/(pi - theta)); its bulk size is 2pi sin(theta) c(0)/t_min.
    """
    magnitude = math.pi * math.sin(theta) / (theta * t_min)
    rate = min(math.pi / theta, 2.0 * math.pi / (math.pi - theta))
    return math.log(2.0 * max(magnitude, 1.0) / TAIL_TOL) / rate


def feature_width(point: AnisotropyPoint) -> float:
    """Narrowest x-scale of the driving term."""
    if point.tag is Regime.EASY_PLANE:
        return point.regime.parameter / math.pi
    return 2.0 * point.regime.parameter / math.pi


def build_grid(
    point: AnisotropyPoint,
    t_min: float,
    config: CalorexConfig | None = None,
    eps: float | None = None,
) -> SolverGrid:
    """Grid adapted to ``point`` and the lowest temperature it will be used at.

    Starting from ``nlie.n_points``, the size doubles until the spacing resolves
    both the driving term and the decay length 1/eps of the shifted kernel with
    ``points_per_width`` points, or until ``nlie.max_points`` is reached.
    """
    config = config or CalorexConfig()
    check_point(point, config)
    nlie = config.nlie
    parameter = point.regime.parameter
    eps = nlie.eps_shift_fraction * parameter if eps is None else eps
    if point.tag is Regime.EASY_PLANE:
        length = half_width(parameter, t_min)
    else:
        length = math.pi
    target = min(feature_width(point), eps) / nlie.points_per_width

    n = nlie.n_points
    while 2.0 * length / n > target and n < nlie.max_points:
        n *= 2
    if 2.0 * length / n > target:
        logger.warning(
            "Grid capped at %d points (spacing %.3g > target %.3g) for d=%.3g",
            n,
            2.0 * length / n,
            target,
            point.d,
        )
    grid = SolverGrid(regime=point.tag, n_points=n, half_width=length, pad_factor=nlie.pad_factor)
    logger.debug("Grid for d=%.6g: n=%d, L=%.4g, dx=%.3g", point.d, n, length, grid.spacing)
    return grid
