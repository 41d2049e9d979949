"""Finite-temperature thermodynamics and caloric effects of the spin-1/2 XXZ chain."""

__version__ = "1.0.0"

from .config import CalorexConfig
from .exceptions import (
    CalorexError,
    ComplexResidue,
    ConfigError,
    DegenerateRegime,
    NoBracket,
    NonConvergence,
    OutOfSupportedRange,
    QuadratureFailure,
    QuadratureNotConverged,
    RegimeViolation,
    ShiftTooLarge,
    SizeTooLarge,
    SlowConvergence,
    StencilCrossesCriticalPoint,
    VanishingHeatCapacity,
)
from .models import (
    AnisotropyPoint,
    CaloricMethod,
    CaloricResult,
    DriveCouplings,
    ExternalConditions,
    RunManifest,
    SweepRow,
    ThermoPoint,
    ValidationReport,
    classify,
    drive_to_d,
    ferro_free_energy,
)
from .session import CalorexSession

__all__ = [
    "CalorexSession",
    "CalorexConfig",
    # Models
    "AnisotropyPoint",
    "CaloricMethod",
    "CaloricResult",
    "DriveCouplings",
    "ExternalConditions",
    "RunManifest",
    "SweepRow",
    "ThermoPoint",
    "ValidationReport",
    "classify",
    "drive_to_d",
    "ferro_free_energy",
    # Exceptions
    "CalorexError",
    "ConfigError",
    "OutOfSupportedRange",
    "DegenerateRegime",
    "QuadratureFailure",
    "ShiftTooLarge",
    "SlowConvergence",
    "NonConvergence",
    "ComplexResidue",
    "StencilCrossesCriticalPoint",
    "VanishingHeatCapacity",
    "QuadratureNotConverged",
    "NoBracket",
    "SizeTooLarge",
    "RegimeViolation",
]
