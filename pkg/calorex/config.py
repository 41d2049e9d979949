"""Typed configuration for the calorex engine.

Configuration files are TOML. Keys may be written flat with dots
(``nlie.n_points = 4096``) or as tables (``[nlie]``); both forms resolve to the
same nested dataclasses. Resolution order is defaults < file < explicit overrides.
"""

from __future__ import annotations

import dataclasses
import logging
import os
import tomllib
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "CALOREX_CONFIG"


@dataclass(frozen=True, slots=True)
class ModelConfig:
    """Supported parameter range.

    Attributes:
        delta_max: Largest anisotropy accepted on the antiferromagnetic branch.
    """

    delta_max: float = 3.0


@dataclass(frozen=True, slots=True)
class KernelConfig:
    """Kernel evaluation settings.

    Attributes:
        quad_abs_tol: Absolute tolerance of the adaptive Fourier quadrature.
        quad_limit: Maximum number of QUADPACK subdivisions / cycles.
        series_cap: Maximum number of Fourier terms for easy-axis series.
        cache_dir: Directory of the on-disk kernel cache, or None to disable it.
    """

    quad_abs_tol: float = 1e-12
    quad_limit: int = 400
    series_cap: int = 1_000_000
    cache_dir: str | None = None


@dataclass(frozen=True, slots=True)
class NlieConfig:
    """Nonlinear integral equation solver settings.

    Attributes:
        n_points: Minimal number of grid points (power of two, at least 256).
        tol: Sup-norm tolerance on the iteration update.
        max_iter: Iteration budget.
        damping: Mixing parameter of the damped fixed-point update.
        d_eps: Proxy distance used for every "d = 0±" quantity.
        d_floor: Smallest |d| the solver accepts.
        eps_shift_fraction: Contour shift as a fraction of the regime parameter.
        pad_factor: Zero-padding factor of real-line FFT convolutions.
        points_per_width: Grid points required across the narrowest feature.
        max_points: Cap of the automatic grid refinement.
        warm_start: Reuse neighbouring solutions as initial guesses in sweeps.
    """

    n_points: int = 4096
    tol: float = 1e-12
    max_iter: int = 1000
    damping: float = 0.5
    d_eps: float = 1e-3
    d_floor: float = 1e-6
    eps_shift_fraction: float = 0.5
    pad_factor: int = 2
    points_per_width: int = 16
    max_points: int = 262_144
    warm_start: bool = True


@dataclass(frozen=True, slots=True)
class ThermoConfig:
    """Finite-difference settings for thermodynamic derivatives.

    Attributes:
        dt_fraction: Relative temperature step of the specific heat stencil.
        dd_step: Minimal step of the d stencils.
        richardson: Apply one Richardson extrapolation step.
    """

    dt_fraction: float = 1e-3
    dd_step: float = 1e-3
    richardson: bool = True


@dataclass(frozen=True, slots=True)
class CaloricConfig:
    """Quadrature settings for caloric observables.

    Attributes:
        quad_rel_tol: Relative tolerance between successive Gauss rules.
        max_nodes: Node budget per integration segment.
    """

    quad_rel_tol: float = 1e-4
    max_nodes: int = 512


@dataclass(frozen=True, slots=True)
class OracleConfig:
    """Exact diagonalization limits.

    Attributes:
        max_sites: Largest chain accepted by the dense diagonalizer.
        max_concurrent_large: Number of n >= 14 diagonalizations allowed at once.
    """

    max_sites: int = 14
    max_concurrent_large: int = 1


_SECTIONS: dict[str, type] = {
    "model": ModelConfig,
    "kernels": KernelConfig,
    "nlie": NlieConfig,
    "thermo": ThermoConfig,
    "caloric": CaloricConfig,
    "oracle": OracleConfig,
}


@dataclass(frozen=True, slots=True)
class CalorexConfig:
    """Complete engine configuration."""

    model: ModelConfig = field(default_factory=ModelConfig)
    kernels: KernelConfig = field(default_factory=KernelConfig)
    nlie: NlieConfig = field(default_factory=NlieConfig)
    thermo: ThermoConfig = field(default_factory=ThermoConfig)
    caloric: CaloricConfig = field(default_factory=CaloricConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)

    def __post_init__(self) -> None:
        n = self.nlie.n_points
        if n < 256 or n & (n - 1):
            raise ConfigError(
                f"nlie.n_points must be a power of two >= 256, got {n}",
                diagnostics={"nlie.n_points": n},
            )
        if self.nlie.damping <= 0.0:
            raise ConfigError(
                "nlie.damping must be positive",
                diagnostics={"nlie.damping": self.nlie.damping},
            )
        if self.nlie.damping > 1.0:
            logger.warning(
                "nlie.damping=%s exceeds 1; the iteration may diverge", self.nlie.damping
            )
        if self.nlie.pad_factor < 2:
            raise ConfigError(
                "nlie.pad_factor must be at least 2",
                diagnostics={"nlie.pad_factor": self.nlie.pad_factor},
            )
        if not 0.0 < self.nlie.eps_shift_fraction < 1.0:
            raise ConfigError(
                "nlie.eps_shift_fraction must lie in (0, 1)",
                diagnostics={"nlie.eps_shift_fraction": self.nlie.eps_shift_fraction},
            )
        if self.nlie.d_eps < self.nlie.d_floor:
            raise ConfigError(
                "nlie.d_eps must not be smaller than nlie.d_floor",
                diagnostics={"nlie.d_eps": self.nlie.d_eps, "nlie.d_floor": self.nlie.d_floor},
            )

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> CalorexConfig:
        """Build a configuration from flat dotted keys and/or nested tables."""
        return cls().with_overrides(data)

    @classmethod
    def from_file(cls, path: str | Path) -> CalorexConfig:
        """Read a TOML configuration file."""
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as e:
            raise ConfigError(f"Cannot read config file {path}: {e}") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Invalid config file {path}: {e}") from e
        logger.debug("Loaded configuration from %s", path)
        return cls.from_mapping(data)

    @classmethod
    def load(cls, path: str | Path | None = None) -> CalorexConfig:
        """Load from ``path``, else from ``$CALOREX_CONFIG``, else defaults."""
        path = path or os.environ.get(CONFIG_ENV_VAR)
        if path:
            return cls.from_file(path)
        return cls()

    def with_overrides(self, data: dict[str, Any]) -> CalorexConfig:
        """Return a copy with the given dotted or nested keys replaced."""
        updates: dict[str, dict[str, Any]] = {}
        for key, value in _flatten(data).items():
            section, _, name = key.partition(".")
            if section not in _SECTIONS or not name:
                raise ConfigError(f"Unknown configuration key: {key}", diagnostics={"key": key})
            names = {f.name for f in fields(_SECTIONS[section])}
            if name not in names:
                raise ConfigError(f"Unknown configuration key: {key}", diagnostics={"key": key})
            updates.setdefault(section, {})[name] = value

        replaced: dict[str, Any] = {}
        for section, values in updates.items():
            current = getattr(self, section)
            try:
                replaced[section] = dataclasses.replace(current, **_coerce(current, values))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Invalid value in section {section}: {e}") from e
        return dataclasses.replace(self, **replaced)

    def to_dict(self) -> dict[str, Any]:
        """Flat dotted-key snapshot, as stored in run manifests."""
        snapshot: dict[str, Any] = {}
        for section in _SECTIONS:
            for key, value in dataclasses.asdict(getattr(self, section)).items():
                snapshot[f"{section}.{key}"] = value
        return snapshot


def _flatten(data: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in data.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def _coerce(current: Any, values: dict[str, Any]) -> dict[str, Any]:
    coerced: dict[str, Any] = {}
    for name, value in values.items():
        default = getattr(current, name)
        if value is None or default is None:
            coerced[name] = value
        elif isinstance(default, bool):
            if not isinstance(value, bool):
                raise ValueError(f"{name} expects a boolean, got {value!r}")
            coerced[name] = value
        elif isinstance(default, int):
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} expects an integer, got {value!r}")
            coerced[name] = int(value)
        elif isinstance(default, float):
            coerced[name] = float(value)
        else:
            coerced[name] = value
    return coerced
