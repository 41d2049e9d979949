"""Data models for calorex."""

from .caloric import CaloricMethod, CaloricResult, GammaIntegral, IntervalSide, interval_side
from .chain import (
    DEFAULT_DELTA_MAX,
    SOLVER_ENERGY_SCALE,
    AnisotropyPoint,
    DriveCouplings,
    EasyAxisAF,
    EasyPlane,
    ExchangeCouplings,
    ExternalConditions,
    Regime,
    RegimeParams,
    classify,
    classify_d,
    delta_from_d,
    drive_to_d,
    ferro_free_energy,
)
from .manifest import ManifestEntry, RunManifest
from .sweep import (
    EXCURSION_COLUMNS,
    STATUS_COLUMN,
    SWEEP_COLUMNS,
    ExcursionRow,
    SweepRow,
    format_float,
)
from .thermo import Branch, JumpLimits, StencilInfo, StencilKind, ThermoPoint, VelocityVerdict
from .validation import CheckResult, Suite, ValidationReport

__all__ = [
    "DEFAULT_DELTA_MAX",
    "SOLVER_ENERGY_SCALE",
    "AnisotropyPoint",
    "DriveCouplings",
    "EasyAxisAF",
    "EasyPlane",
    "ExchangeCouplings",
    "ExternalConditions",
    "Regime",
    "RegimeParams",
    "classify",
    "classify_d",
    "delta_from_d",
    "drive_to_d",
    "ferro_free_energy",
    "CaloricMethod",
    "CaloricResult",
    "GammaIntegral",
    "IntervalSide",
    "interval_side",
    "ManifestEntry",
    "RunManifest",
    "EXCURSION_COLUMNS",
    "STATUS_COLUMN",
    "SWEEP_COLUMNS",
    "ExcursionRow",
    "SweepRow",
    "format_float",
    "Branch",
    "JumpLimits",
    "StencilInfo",
    "StencilKind",
    "ThermoPoint",
    "VelocityVerdict",
    "CheckResult",
    "Suite",
    "ValidationReport",
]
