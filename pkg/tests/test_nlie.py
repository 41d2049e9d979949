"""Tests for the nonlinear integral equation solver."""

import math
from dataclasses import replace

import numpy as np
import pytest

from calorex.config import CalorexConfig
from calorex.exceptions import DegenerateRegime, NonConvergence
from calorex.models import ExternalConditions, classify_d
from calorex.solver.grid import build_grid
from calorex.solver.kernels import build_kernel_table
from calorex.solver.nlie import fermi, log1pexp, prepare, residual, solve


class TestHelpers:
    """Tests for the overflow-safe helpers."""

    def test_log1pexp_large_arguments(self):
        # Arrange
        z = np.array([-800.0, 0.0, 800.0])

        # Act
        values = log1pexp(z)

        # Assert
        np.testing.assert_allclose(values.real, [0.0, math.log(2.0), 800.0])
        assert np.all(np.isfinite(values))

    def test_fermi_is_bounded(self):
        # Arrange
        z = np.array([-800.0, 0.0, 800.0])

        # Act
        values = fermi(z)

        # Assert
        np.testing.assert_allclose(values.real, [0.0, 0.5, 1.0])


class TestSolve:
    """Tests for solve."""

    def test_free_fermion_point_is_solved_by_driving_term(self):
        # Arrange
        point = classify_d(-1.0)
        grid, kernels = prepare(point, 0.5)

        # Act
        aux = solve(point, ExternalConditions(t=0.5, h=0.2), grid, kernels)

        # Assert
        expected = -2.0 * math.pi * kernels.c_up / 0.5 + 0.2 / 0.5
        np.testing.assert_allclose(aux.ln_a, expected, atol=1e-12)
        assert aux.iterations == 1

    @pytest.mark.parametrize("d", [-0.5, 0.5])
    def test_converged_solution_has_small_residual(self, d):
        # Arrange
        point = classify_d(d)
        grid, kernels = prepare(point, 0.5)

        # Act
        aux = solve(point, ExternalConditions(t=0.5), grid, kernels)

        # Assert
        assert aux.residual < 1e-12
        assert residual(aux, grid, kernels) < 1e-9
        assert len(aux.residual_history) == aux.iterations

    @pytest.mark.parametrize("d", [-0.5, 0.5])
    def test_perturbed_solution_has_large_residual(self, d):
        # Arrange
        point = classify_d(d)
        grid, kernels = prepare(point, 0.5)
        aux = solve(point, ExternalConditions(t=0.5), grid, kernels)
        bump = 1e-3 * np.exp(-(grid.x**2))
        perturbed = replace(aux, ln_a=aux.ln_a + bump, ln_abar=aux.ln_abar + bump)

        # Act
        converged = residual(aux, grid, kernels)
        disturbed = residual(perturbed, grid, kernels)

        # Assert
        assert disturbed > 1e-5
        assert disturbed > 1e3 * converged

    def test_zero_field_solutions_are_conjugate(self):
        # Arrange
        point = classify_d(-0.5)

        # Act
        aux = solve(point, ExternalConditions(t=0.5))

        # Assert
        np.testing.assert_allclose(aux.ln_a, aux.ln_abar.conj(), atol=1e-10)

    def test_warm_start_saves_iterations(self):
        # Arrange
        point = classify_d(-0.5)
        grid, kernels = prepare(point, 0.5)
        previous = solve(point, ExternalConditions(t=0.5), grid, kernels)

        # Act
        cold = solve(point, ExternalConditions(t=0.52), grid, kernels)
        warm = solve(point, ExternalConditions(t=0.52), grid, kernels, initial=previous)

        # Assert
        assert warm.iterations < cold.iterations
        np.testing.assert_allclose(warm.ln_a, cold.ln_a, atol=1e-10)

    def test_warm_start_across_grids(self):
        # Arrange
        point = classify_d(-0.5)
        coarse = build_grid(point, 0.5)
        previous = solve(point, ExternalConditions(t=0.5), coarse)
        fine = build_grid(point, 0.25)

        # Act
        aux = solve(point, ExternalConditions(t=0.5), fine, initial=previous)

        # Assert
        assert aux.grid.key == fine.key
        assert aux.residual < 1e-12

    def test_iteration_budget(self):
        # Arrange
        config = CalorexConfig().with_overrides({"nlie.max_iter": 3})
        point = classify_d(-0.5)

        # Act
        with pytest.raises(NonConvergence) as exc:
            solve(point, ExternalConditions(t=0.5), config=config)

        # Assert
        assert len(exc.value.residual_history) == 3
        assert exc.value.diagnostics["damping"] == 0.5

    def test_isotropic_point_rejected(self):
        # Act & Assert
        with pytest.raises(DegenerateRegime):
            solve(classify_d(1e-8), ExternalConditions(t=0.5))

    def test_mismatched_grid_rejected(self):
        # Arrange
        point = classify_d(-0.5)
        grid = build_grid(point, 0.5)
        kernels = build_kernel_table(point, grid)
        other = build_grid(point, 0.05)

        # Act & Assert
        with pytest.raises(ValueError):
            solve(point, ExternalConditions(t=0.5), other, kernels)
