"""Independent reference results: exact diagonalization, free fermions and asymptotics."""

from .asymptotics import (
    GaplessAsymptote,
    GappedAsymptote,
    SpinonGas,
    asymptote_gapless,
    asymptote_gapped_af,
    asymptote_gapped_ferro,
    asymptote_isotropic,
    asymptote_spinon_gas,
    velocity,
)
from .ed import Boundary, EDSpectrum, dense_hamiltonian, ed_spectrum, ed_thermo
from .free_fermion import FreeFermionThermo, ground_energy, xx_free_fermion

__all__ = [
    "Boundary",
    "EDSpectrum",
    "FreeFermionThermo",
    "GaplessAsymptote",
    "GappedAsymptote",
    "SpinonGas",
    "asymptote_gapless",
    "asymptote_gapped_af",
    "asymptote_gapped_ferro",
    "asymptote_isotropic",
    "asymptote_spinon_gas",
    "dense_hamiltonian",
    "ed_spectrum",
    "ed_thermo",
    "ground_energy",
    "velocity",
    "xx_free_fermion",
]
