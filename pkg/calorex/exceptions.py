"""Exceptions for the calorex engine."""

from typing import Any


class CalorexError(Exception):
    """Base exception for calorex errors.

    Attributes:
        diagnostics: Structured details about the failure (parameters, residuals, step sizes).
    """

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics if diagnostics is not None else {}


class ConfigError(CalorexError):
    """Raised when a configuration value or file is invalid.

    Attributes:
        diagnostics: Offending keys and values.
    """

    pass


class OutOfSupportedRange(CalorexError):
    """Raised when an anisotropy lies outside the supported antiferromagnetic branch.

    Attributes:
        diagnostics: The requested anisotropy and the supported interval.
    """

    pass


class DegenerateRegime(CalorexError):
    """Raised when a kernel or solve is requested at (or too close to) the isotropic point.

    Attributes:
        diagnostics: The deviation d and the floor it violated.
    """

    pass


class QuadratureFailure(CalorexError):
    """Raised when adaptive quadrature does not reach its tolerance.

    Attributes:
        diagnostics: Achieved error estimate and subdivision count.
    """

    pass


class ShiftTooLarge(CalorexError):
    """Raised when a contour shift leaves the strip where the shifted kernel is integrable.

    Attributes:
        diagnostics: Strip width, requested shift and resulting decay rate.
    """

    pass


class SlowConvergence(CalorexError):
    """Raised when a kernel series needs more terms than the configured cap.

    Attributes:
        diagnostics: Required and allowed number of terms.
    """

    pass


class NonConvergence(CalorexError):
    """Raised when an iteration does not reach its tolerance within the iteration budget.

    Attributes:
        diagnostics: Solver parameters and final residual.
        residual_history: Sup-norm update per iteration.
    """

    def __init__(
        self,
        message: str,
        diagnostics: dict[str, Any] | None = None,
        residual_history: list[float] | None = None,
    ):
        super().__init__(message, diagnostics)
        self.residual_history = residual_history if residual_history is not None else []


class ComplexResidue(CalorexError):
    """Raised when a quantity that must be real keeps an imaginary part above tolerance.

    Attributes:
        diagnostics: The imaginary part found and the tolerance.
    """

    pass


class StencilCrossesCriticalPoint(CalorexError):
    """Raised when a finite-difference stencil in d cannot avoid d = 0.

    Attributes:
        diagnostics: Base point, step and d_eps.
    """

    pass


class VanishingHeatCapacity(CalorexError):
    """Raised when the Grüneisen ratio is requested with a vanishing specific heat.

    Attributes:
        diagnostics: The specific heat value.
    """

    pass


class QuadratureNotConverged(CalorexError):
    """Raised when the d-quadrature of the Grüneisen ratio exceeds its node budget.

    Attributes:
        diagnostics: Node counts and successive estimates.
    """

    pass


class NoBracket(CalorexError):
    """Raised when an isentrope cannot be bracketed in temperature.

    Attributes:
        diagnostics: Target entropy and the temperatures probed.
    """

    pass


class SizeTooLarge(CalorexError):
    """Raised when exact diagonalization is requested beyond the supported chain length.

    Attributes:
        diagnostics: Requested and maximal number of sites.
    """

    pass


class RegimeViolation(CalorexError):
    """Raised when an asymptotic formula is evaluated outside its validity regime.

    Attributes:
        diagnostics: Temperature and the gap it was compared against.
    """

    pass
