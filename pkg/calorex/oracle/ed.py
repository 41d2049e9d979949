"""Exact diagonalization of short XXZ chains, blocked by total S^z."""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations
from math import comb

import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from ..exceptions import SizeTooLarge

logger = logging.getLogger(__name__)

DEFAULT_MAX_SITES = 14
LARGE_CHAIN = 14

_large_slots: dict[int, threading.BoundedSemaphore] = {}
_slots_lock = threading.Lock()


class Boundary(StrEnum):
    """Boundary condition of the finite chain."""

    PERIODIC = "periodic"
    OPEN = "open"


@dataclass(frozen=True)
class EDSpectrum:
    """Full spectrum of a finite chain.

    Attributes:
        n_sites: Chain length.
        boundary: Periodic or open.
        delta: Anisotropy.
        h: Magnetic field.
        energy_scale: Exchange J multiplying the bond terms.
        eigenvalues: All 2^n eigenvalues, sorted.
        sector_sizes: Dimension of each S^z sector, indexed by the number of up spins.
    """

    n_sites: int
    boundary: Boundary
    delta: float
    h: float
    energy_scale: float
    eigenvalues: NDArray = field(repr=False)
    sector_sizes: tuple[int, ...] = ()


def _bonds(n: int, boundary: Boundary) -> list[tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(n - 1)]
    if boundary is Boundary.PERIODIC and n > 2:
        bonds.append((n - 1, 0))
    return bonds


def sector_hamiltonian(
    n: int,
    n_up: int,
    boundary: Boundary,
    delta: float,
    h: float = 0.0,
    energy_scale: float = 1.0,
) -> NDArray:
    """Dense Hamiltonian block with ``n_up`` up spins (bit 1 = up)."""
    states = [sum(1 << i for i in chosen) for chosen in combinations(range(n), n_up)]
    index = {s: k for k, s in enumerate(states)}
    bonds = _bonds(n, boundary)
    dim = len(states)
    block = np.zeros((dim, dim))
    sz_total = n_up - n / 2.0
    for k, s in enumerate(states):
        diag = -h * sz_total
        for i, j in bonds:
            up_i, up_j = (s >> i) & 1, (s >> j) & 1
            if up_i == up_j:
                diag += 0.25 * energy_scale * delta
            else:
                diag -= 0.25 * energy_scale * delta
                # (S+S- + S-S+)/2 swaps the antiparallel pair.
                flipped = s ^ ((1 << i) | (1 << j))
                block[index[flipped], k] += 0.5 * energy_scale
        block[k, k] = diag
    return block


def _slot(max_concurrent_large: int) -> threading.BoundedSemaphore:
    with _slots_lock:
        if max_concurrent_large not in _large_slots:
            _large_slots[max_concurrent_large] = threading.BoundedSemaphore(max_concurrent_large)
        return _large_slots[max_concurrent_large]


def ed_spectrum(
    n: int,
    boundary: Boundary | str,
    delta: float,
    h: float = 0.0,
    *,
    energy_scale: float = 1.0,
    max_sites: int = DEFAULT_MAX_SITES,
    max_concurrent_large: int = 1,
) -> EDSpectrum:
    """Diagonalize H = J sum [(S+S- + S-S+)/2 + Delta Sz Sz] - h sum Sz sector by sector.

    Chains of ``LARGE_CHAIN`` sites or more hold one of ``max_concurrent_large``
    slots while diagonalizing.

    Raises:
        SizeTooLarge: If n lies outside [2, max_sites].
    """
    if not 2 <= n <= max_sites:
        raise SizeTooLarge(
            f"Exact diagonalization supports 2 <= n <= {max_sites}, got {n}",
            diagnostics={"n_sites": n, "max_sites": max_sites},
        )
    boundary = Boundary(boundary)

    def run() -> list[NDArray]:
        return [
            np.linalg.eigvalsh(sector_hamiltonian(n, n_up, boundary, delta, h, energy_scale))
            for n_up in range(n + 1)
        ]

    if n >= LARGE_CHAIN:
        with _slot(max_concurrent_large):
            blocks = run()
    else:
        blocks = run()
    logger.debug("Diagonalized n=%d %s chain at delta=%.4g", n, boundary, delta)
    return EDSpectrum(
        n_sites=n,
        boundary=boundary,
        delta=delta,
        h=h,
        energy_scale=energy_scale,
        eigenvalues=np.sort(np.concatenate(blocks)),
        sector_sizes=tuple(comb(n, k) for k in range(n + 1)),
    )


def dense_hamiltonian(
    n: int, boundary: Boundary | str, delta: float, h: float = 0.0, energy_scale: float = 1.0
) -> NDArray:
    """Full 2^n x 2^n Hamiltonian from Kronecker products, without any blocking."""
    boundary = Boundary(boundary)
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])
    sm = sp.T
    sz = np.diag([0.5, -0.5])
    eye = np.eye(2)

    def site(op: NDArray, i: int) -> NDArray:
        out = np.array([[1.0]])
        for k in range(n):
            out = np.kron(out, op if k == i else eye)
        return out

    dim = 2**n
    ham = np.zeros((dim, dim))
    for i, j in _bonds(n, boundary):
        hop = site(sp, i) @ site(sm, j) + site(sm, i) @ site(sp, j)
        ham += energy_scale * (0.5 * hop + delta * site(sz, i) @ site(sz, j))
    for i in range(n):
        ham -= h * site(sz, i)
    return ham


def ed_thermo(spectrum: EDSpectrum, t: float) -> tuple[float, float, float]:
    """Canonical (f, S, c) per site from a full spectrum.

    Raises:
        ValueError: If t is not positive.
    """
    if not t > 0.0:
        raise ValueError(f"Temperature must be positive, got {t}")
    n = spectrum.n_sites
    energies = spectrum.eigenvalues
    log_z = float(logsumexp(-energies / t))
    weights = np.exp(-energies / t - log_z)
    mean = float(weights @ energies)
    variance = float(weights @ (energies - mean) ** 2)
    free = -t * log_z / n
    entropy = (mean / t + log_z) / n
    heat = variance / (t * t) / n
    return free, entropy, heat
