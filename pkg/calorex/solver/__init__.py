"""Numerical solution of the integral equations and the thermodynamics built on it."""

from .caloric import (
    asymptotic_caloric,
    caloric_excursion,
    delta_entropy,
    delta_temperature_isentrope,
    delta_temperature_paper,
    integrate_gamma,
)
from .elliptic import EllipticSet, elliptic_from_phi, elliptic_from_q
from .grid import SolverGrid, build_grid
from .kernels import KernelCache, KernelTable, build_kernel_table
from .nlie import AuxFunctions, residual, solve
from .thermo import (
    DerivFunctions,
    d_derivatives,
    deriv_t,
    entropy,
    entropy_at,
    evaluate,
    free_energy_rel,
    grueneisen,
    jump_limits,
    specific_heat,
    thermo_point,
    velocity_verdict,
)

__all__ = [
    "AuxFunctions",
    "DerivFunctions",
    "EllipticSet",
    "KernelCache",
    "KernelTable",
    "SolverGrid",
    "asymptotic_caloric",
    "build_grid",
    "build_kernel_table",
    "caloric_excursion",
    "d_derivatives",
    "delta_entropy",
    "delta_temperature_isentrope",
    "delta_temperature_paper",
    "deriv_t",
    "elliptic_from_phi",
    "elliptic_from_q",
    "entropy",
    "entropy_at",
    "evaluate",
    "free_energy_rel",
    "grueneisen",
    "integrate_gamma",
    "jump_limits",
    "residual",
    "solve",
    "specific_heat",
    "thermo_point",
    "velocity_verdict",
]
