"""Single-point thermodynamics."""

from __future__ import annotations

from ..models import JumpLimits, ThermoPoint, VelocityVerdict, classify
from ..solver.thermo import (
    ferro_free_energy_shifted,
    jump_limits,
    thermo_point,
    velocity_verdict,
)
from .base import BaseResource


class PointResource(BaseResource):
    """Handler for thermodynamics at single parameter points."""

    async def solve(self, delta: float, t: float, h: float = 0.0) -> ThermoPoint:
        """Returns all thermodynamic quantities at anisotropy ``delta``.

        Args:
            delta: Anisotropy Jz/J on the antiferromagnetic branch.
            t: Temperature (solver convention).
            h: Magnetic field (solver convention).

        Returns:
            The thermodynamic record with diagnostics.

        Raises:
            OutOfSupportedRange: If delta is outside [0, model.delta_max].
            DegenerateRegime: If delta is within nlie.d_floor of 1.
            NonConvergence: If the equations do not converge.
        """
        point = classify(delta, self._config.model.delta_max)
        return await self._offload(thermo_point, point.d, t, h, self._config)

    async def jump_limits(self, t: float) -> JumpLimits:
        """Returns the entropy at +-d_eps and +-d_eps/2."""
        return await self._offload(jump_limits, t, self._config)

    async def velocity_verdict(self) -> VelocityVerdict:
        return await self._offload(velocity_verdict, self._config)

    async def ferro_free_energy(self, delta: float, t: float) -> float:
        """Returns the ferromagnetic free energy at |Jz|/J = delta, shifted by e0."""
        return await self._offload(ferro_free_energy_shifted, delta, t, self._config)
