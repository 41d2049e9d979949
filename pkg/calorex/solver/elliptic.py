"""Elliptic quantities of the gapped easy-axis regime, from the nome q = exp(-phi)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..exceptions import NonConvergence

MAX_FACTORS = 100_000


@dataclass(frozen=True, slots=True)
class EllipticSet:
    """Elliptic modules, half-period and gap constants.

    Attributes:
        q: Nome exp(-phi), 0 < q < 1.
        K: Elliptic half-period.
        k: Elliptic modulus.
        k_prime: Complementary modulus.
        gap_amp: Amplitude A = k' / (2 J K k^2 sinh phi).
        gap: Gap B = (K k' / pi) J sinh phi.
    """

    q: float
    K: float
    k: float
    k_prime: float
    gap_amp: float
    gap: float

    @property
    def phi(self) -> float:
        return -math.log(self.q)


def _product(factor, tol: float) -> tuple[float, int]:
    value = 1.0
    for n in range(1, MAX_FACTORS + 1):
        f = factor(n)
        value *= f
        if abs(f - 1.0) < tol:
            return value, n
    raise NonConvergence(
        "Elliptic product did not converge", diagnostics={"factors": MAX_FACTORS}
    )


def elliptic_from_q(q: float, tol: float = 1e-16, energy_scale: float = 1.0) -> EllipticSet:
    """Evaluate K, k and k' from their infinite products and derive A and B.

    Each product stops at the first factor within ``tol`` of 1. ``energy_scale`` is
    the exchange J entering A and B (J = 1 gives the Hamiltonian's own units).

    Raises:
        NonConvergence: If q is not inside (0, 1).
    """
    if not 0.0 < q < 1.0:
        raise NonConvergence(f"Nome must lie in (0, 1), got {q}", diagnostics={"q": q})
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    def half_period(n: int) -> float:
        odd, even = q ** (2 * n - 1), q ** (2 * n)
        return ((1.0 + odd) / (1.0 - odd) * (1.0 - even) / (1.0 + even)) ** 2

    def modulus(n: int) -> float:
        return ((1.0 + q ** (2 * n)) / (1.0 + q ** (2 * n - 1))) ** 4

    def complement(n: int) -> float:
        odd = q ** (2 * n - 1)
        return ((1.0 - odd) / (1.0 + odd)) ** 4

    K = 0.5 * math.pi * _product(half_period, tol)[0]
    k = 4.0 * math.sqrt(q) * _product(modulus, tol)[0]
    k_prime = _product(complement, tol)[0]

    sinh_phi = math.sinh(-math.log(q))
    gap_amp = k_prime / (2.0 * energy_scale * K * k * k * sinh_phi)
    gap = K * k_prime / math.pi * energy_scale * sinh_phi
    return EllipticSet(q=q, K=K, k=k, k_prime=k_prime, gap_amp=gap_amp, gap=gap)


def elliptic_from_phi(phi: float, tol: float = 1e-16, energy_scale: float = 1.0) -> EllipticSet:
    return elliptic_from_q(math.exp(-phi), tol=tol, energy_scale=energy_scale)
