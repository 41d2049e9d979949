"""Tests for the reference oracles."""

import math

import numpy as np
import pytest

from calorex.exceptions import RegimeViolation, SizeTooLarge
from calorex.oracle import (
    Boundary,
    asymptote_gapless,
    asymptote_gapped_af,
    asymptote_gapped_ferro,
    asymptote_isotropic,
    asymptote_spinon_gas,
    dense_hamiltonian,
    ed_spectrum,
    ed_thermo,
    ground_energy,
    velocity,
    xx_free_fermion,
)
from calorex.oracle.asymptotics import ferro_gap, isotropic_correction, spinon_energy
from calorex.oracle.ed import sector_hamiltonian


class TestExactDiagonalization:
    """Tests for the exact diagonalization oracle."""

    def test_two_site_heisenberg(self):
        # Act
        spectrum = ed_spectrum(2, Boundary.OPEN, delta=1.0)

        # Assert
        np.testing.assert_allclose(spectrum.eigenvalues, [-0.75, 0.25, 0.25, 0.25], atol=1e-14)

    def test_two_site_general_anisotropy(self):
        # Arrange
        delta = 0.4

        # Act
        spectrum = ed_spectrum(2, Boundary.OPEN, delta=delta, energy_scale=2.0)

        # Assert
        expected = sorted(
            [2 * delta / 4, 2 * delta / 4, 2 * (-delta / 4 + 0.5), 2 * (-delta / 4 - 0.5)]
        )
        np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-14)

    def test_sectors_match_dense_hamiltonian(self):
        # Arrange
        n, delta, h = 8, 0.7, 0.3

        # Act
        sectors = ed_spectrum(n, Boundary.PERIODIC, delta=delta, h=h)
        dense = np.linalg.eigvalsh(dense_hamiltonian(n, Boundary.PERIODIC, delta, h))

        # Assert
        assert sum(sectors.sector_sizes) == 2**n
        np.testing.assert_allclose(sectors.eigenvalues, np.sort(dense), atol=1e-12)

    def test_sector_block_is_symmetric(self):
        # Act
        block = sector_hamiltonian(6, 3, Boundary.PERIODIC, delta=1.3)

        # Assert
        np.testing.assert_allclose(block, block.T)
        assert block.shape == (20, 20)

    @pytest.mark.parametrize("n", [1, 15])
    def test_size_limits(self, n):
        # Act & Assert
        with pytest.raises(SizeTooLarge):
            ed_spectrum(n, Boundary.PERIODIC, delta=1.0)

    def test_high_temperature_entropy(self):
        # Arrange
        spectrum = ed_spectrum(8, Boundary.PERIODIC, delta=1.0)

        # Act
        _, entropy, heat = ed_thermo(spectrum, 1e6)

        # Assert
        assert entropy == pytest.approx(math.log(2.0), abs=1e-9)
        assert 0.0 < heat < 1e-9

    def test_two_site_thermodynamics(self):
        # Arrange
        spectrum = ed_spectrum(2, Boundary.OPEN, delta=1.0)
        t = 0.5
        energies = np.array([-0.75, 0.25, 0.25, 0.25])
        weights = np.exp(-energies / t)
        z = weights.sum()
        mean = (weights @ energies) / z

        # Act
        free, entropy, _ = ed_thermo(spectrum, t)

        # Assert
        assert free == pytest.approx(-t * math.log(z) / 2)
        assert entropy == pytest.approx((mean / t + math.log(z)) / 2)

    def test_rejects_non_positive_temperature(self):
        # Arrange
        spectrum = ed_spectrum(2, Boundary.OPEN, delta=1.0)

        # Act & Assert
        with pytest.raises(ValueError):
            ed_thermo(spectrum, 0.0)


class TestFreeFermions:
    """Tests for the XX-chain free-fermion oracle."""

    def test_ground_energy(self):
        # Act & Assert
        assert ground_energy(0.0, energy_scale=1.0) == pytest.approx(-1.0 / math.pi, abs=1e-12)

    def test_high_temperature_limit(self):
        # Act
        result = xx_free_fermion(1e5)

        # Assert
        assert result.entropy == pytest.approx(math.log(2.0), abs=1e-9)
        assert result.f == pytest.approx(-1e5 * math.log(2.0), rel=1e-9)

    def test_field_changes_entropy_symmetrically(self):
        # Act
        up = xx_free_fermion(0.3, h=0.2)
        down = xx_free_fermion(0.3, h=-0.2)

        # Assert
        assert up.entropy == pytest.approx(down.entropy, abs=1e-10)
        assert up.f == pytest.approx(down.f, abs=1e-10)

    def test_entropy_is_minus_temperature_derivative(self):
        # Arrange
        t, step = 0.4, 1e-4

        # Act
        slope = (xx_free_fermion(t + step).f - xx_free_fermion(t - step).f) / (2 * step)

        # Assert
        assert xx_free_fermion(t).entropy == pytest.approx(-slope, abs=1e-7)

    def test_matches_exact_diagonalization(self):
        # Arrange
        t = 0.5
        spectrum = ed_spectrum(12, Boundary.PERIODIC, delta=0.0)

        # Act
        _, entropy, _ = ed_thermo(spectrum, t)
        reference = xx_free_fermion(t)

        # Assert
        assert entropy == pytest.approx(reference.entropy, abs=1e-2)

    def test_saturated_field(self):
        # Act
        result = xx_free_fermion(0.1, h=3.0)

        # Assert
        assert result.entropy < 1e-6

    def test_rejects_non_positive_temperature(self):
        # Act & Assert
        with pytest.raises(ValueError):
            xx_free_fermion(0.0)


class TestAsymptotics:
    """Tests for the low-temperature asymptotic forms."""

    def test_gapless_at_free_fermion_point(self):
        # Act
        result = asymptote_gapless(math.pi / 2, 0.1)

        # Assert
        assert result.v == pytest.approx(2.0)
        assert result.v_alt == pytest.approx(1.0)
        assert result.f_rel == pytest.approx(-math.pi * 0.01 / 12)
        assert result.entropy == pytest.approx(math.pi * 0.1 / 6)

    def test_gapless_matches_free_fermions_at_low_temperature(self):
        # Arrange
        t = 0.02

        # Act
        asymptote = asymptote_gapless(math.pi / 2, t)
        exact = xx_free_fermion(t, energy_scale=2.0)

        # Assert
        assert exact.entropy == pytest.approx(asymptote.entropy, rel=1e-3)

    def test_velocity_isotropic_limit(self):
        # Act & Assert
        assert velocity(0.0) == math.pi
        assert velocity(1e-8) == pytest.approx(math.pi)

    def test_gapless_rejects_easy_axis(self):
        # Act & Assert
        with pytest.raises(ValueError):
            asymptote_gapless(2.0, 0.1)

    def test_gapped_af(self):
        # Act
        result = asymptote_gapped_af(math.acosh(2.0), 0.05)

        # Assert
        assert result.leading < 0.0
        assert result.f_rel == pytest.approx(result.leading + result.correction)
        assert result.elliptic.gap > 0.1

    def test_gapped_af_regime_violation(self):
        # Act & Assert
        with pytest.raises(RegimeViolation) as exc:
            asymptote_gapped_af(math.acosh(2.0), 10.0)
        assert exc.value.diagnostics["fraction"] == 0.5

    def test_ferro_gap(self):
        # Assert
        assert ferro_gap(2.0) == 1.0
        assert ferro_gap(0.5) == 0.5

    def test_gapped_ferro_scaling(self):
        # Arrange
        t = 0.2

        # Act
        unit = asymptote_gapped_ferro(2.0, t / 2.0, energy_scale=1.0)
        scaled = asymptote_gapped_ferro(2.0, t, energy_scale=2.0)

        # Assert
        assert scaled == pytest.approx(2.0 * unit)
        assert scaled < 0.0

    def test_gapped_ferro_regime_violation(self):
        # Act & Assert
        with pytest.raises(RegimeViolation):
            asymptote_gapped_ferro(1.1, 1.0)

    def test_isotropic(self):
        # Arrange
        t = 1e-4

        # Act
        value = asymptote_isotropic(t)

        # Assert
        assert isotropic_correction(t) - 1.0 < 2e-3
        assert value == pytest.approx(-t * t / 6.0, rel=2e-3)

    def test_isotropic_range(self):
        # Act & Assert
        with pytest.raises(RegimeViolation):
            asymptote_isotropic(10.0)

    def test_spinon_gas_approaches_parabolic_band(self):
        # Arrange
        phi = math.acosh(2.0)

        # Act
        result = asymptote_spinon_gas(phi, 0.002)

        # Assert
        assert result.f_rel < 0.0
        assert result.f_rel / result.leading == pytest.approx(1.0, abs=1e-2)

    def test_spinon_gas_band_correction_shrinks_with_temperature(self):
        # Arrange
        phi = math.acosh(2.0)

        # Act
        ratios = [asymptote_spinon_gas(phi, t) for t in (0.01, 0.02, 0.04)]

        # Assert
        deviations = [abs(r.f_rel / r.leading - 1.0) for r in ratios]
        assert deviations[0] < deviations[1] < deviations[2]

    def test_spinon_gas_doubles_leading_expansion_term(self):
        # Arrange
        phi = math.acosh(2.0)

        # Act
        gas = asymptote_spinon_gas(phi, 0.05)
        expansion = asymptote_gapped_af(phi, 0.05)

        # Assert
        assert gas.leading == pytest.approx(2.0 * expansion.leading, rel=1e-12)
        assert abs(expansion.terms_ratio) > 1.0

    def test_spinon_energy_is_zero_at_band_bottom(self):
        # Arrange
        es = asymptote_spinon_gas(math.acosh(2.0), 0.05).elliptic

        # Act & Assert
        assert spinon_energy(0.0, es) == 0.0
        top = es.gap / es.k_prime - es.gap
        assert spinon_energy(0.5 * math.pi, es) == pytest.approx(top, rel=1e-12)

    def test_spinon_gas_regime_violation(self):
        # Act & Assert
        with pytest.raises(RegimeViolation):
            asymptote_spinon_gas(math.acosh(2.0), 10.0)
