"""Tests for the validation suites."""

import math
from unittest.mock import Mock, patch

import numpy as np
import pytest

from calorex.config import CalorexConfig
from calorex.exceptions import NonConvergence
from calorex.models import Suite
from calorex.validation import (
    FULL_CHECKS,
    QUICK_CHECKS,
    _plain,
    check_caloric_magnitude,
    check_entropy_jump,
    check_fig4a_sign_change,
    check_free_fermion_gate,
    check_gapped_asymptote,
    check_grueneisen_plateau,
    check_high_temperature,
    run_check,
    run_suite,
)


class TestRunCheck:
    """Tests for run_check."""

    def test_successful_outcome(self):
        # Arrange
        check = Mock(return_value=(True, {"error": np.float64(1e-9)}, {"error": 1e-6}))
        config = CalorexConfig()

        # Act
        result = run_check("demo", check, config)

        # Assert
        check.assert_called_once_with(config)
        assert result.name == "demo"
        assert result.passed
        assert result.measured == {"error": 1e-9}
        assert type(result.measured["error"]) is float
        assert result.message is None

    def test_failed_bound(self):
        # Arrange
        check = Mock(return_value=(False, {"error": 1.0}, {"error": 1e-6}))

        # Act
        result = run_check("demo", check, CalorexConfig())

        # Assert
        assert not result.passed
        assert result.expected == {"error": 1e-6}

    def test_engine_error_becomes_failure(self):
        # Arrange
        error = NonConvergence("Iteration stalled", {"defect": np.float64(0.5)})
        check = Mock(side_effect=error)

        # Act
        result = run_check("demo", check, CalorexConfig())

        # Assert
        assert not result.passed
        assert result.message == "NonConvergence: Iteration stalled"
        assert result.measured == {"defect": 0.5}

    def test_other_errors_propagate(self):
        # Arrange
        check = Mock(side_effect=KeyError("bug"))

        # Act & Assert
        with pytest.raises(KeyError):
            run_check("demo", check, CalorexConfig())


class TestPlain:
    """Tests for converting numpy values in reports."""

    def test_nested_values(self):
        # Act
        plain = _plain({"a": np.arange(3), "b": {"c": np.int64(4)}, "d": "text"})

        # Assert
        assert plain == {"a": [0, 1, 2], "b": {"c": 4}, "d": "text"}
        assert type(plain["b"]["c"]) is int


class TestRunSuite:
    """Tests for run_suite."""

    def test_suite_order_and_report(self):
        # Arrange
        checks = {
            "first": Mock(return_value=(True, {}, {})),
            "second": Mock(side_effect=NonConvergence("stuck")),
            "third": Mock(return_value=(True, {}, {})),
        }

        # Act
        with patch.dict("calorex.validation.QUICK_CHECKS", checks, clear=True):
            report = run_suite("quick")

        # Assert
        assert report.suite is Suite.QUICK
        assert [check.name for check in report.checks] == ["first", "second", "third"]
        assert not report.passed
        assert report._to_dict()["checks"][1]["message"] == "NonConvergence: stuck"

    def test_full_suite_extends_quick_suite(self):
        # Assert
        assert list(FULL_CHECKS)[: len(QUICK_CHECKS)] == list(QUICK_CHECKS)
        assert "ed_convergence" in FULL_CHECKS
        assert "ed_convergence" not in QUICK_CHECKS
        assert "fig4a_sign_change" in FULL_CHECKS
        assert "gapped_asymptote" in FULL_CHECKS


class TestChecks:
    """Tests running individual checks for real."""

    def test_free_fermion_gate(self):
        # Act
        passed, measured, expected = check_free_fermion_gate(CalorexConfig())

        # Assert
        assert passed
        assert measured["error"] <= expected["error"]

    def test_high_temperature(self):
        # Act
        passed, measured, _ = check_high_temperature(CalorexConfig())

        # Assert
        assert passed
        assert measured["max_error"] < 1e-4

    @pytest.mark.slow
    def test_quick_suite_passes(self):
        # Act
        report = run_suite(Suite.QUICK)

        # Assert
        assert report.passed, [check.name for check in report.failures]

    @pytest.mark.slow
    def test_gapped_asymptote_matches_spinon_gas(self):
        # Act
        passed, measured, expected = check_gapped_asymptote(CalorexConfig())

        # Assert
        assert passed, measured
        assert measured["max_relative"] <= expected["relative"]
        assert measured["k_identity"] <= 1e-10

    @pytest.mark.slow
    def test_fig4a_sign_change_only_at_lowest_temperature(self):
        # Act
        passed, measured, _ = check_fig4a_sign_change(CalorexConfig())

        # Assert
        assert passed, measured
        assert measured["t=0.1"]["sign_changes"] > 0
        for t in (0.25, 0.5, 0.75, 1.0):
            assert measured[f"t={t}"]["sign_changes"] == 0

    @pytest.mark.slow
    def test_grueneisen_plateau_on_both_sides(self):
        # Act
        passed, measured, _ = check_grueneisen_plateau(CalorexConfig())

        # Assert
        assert passed, measured
        assert all(g < 0.0 for g in measured.values())

    @pytest.mark.slow
    def test_entropy_jump_across_isotropic_point(self):
        # Act
        passed, measured, _ = check_entropy_jump(CalorexConfig())

        # Assert
        assert passed, measured
        assert measured["ratio"] == pytest.approx(2.0, rel=0.25)
        assert measured["gamma_integral"] == pytest.approx(math.log(2.0), rel=0.15)

    @pytest.mark.slow
    def test_caloric_magnitude_grows_with_temperature(self):
        # Act
        passed, measured, _ = check_caloric_magnitude(CalorexConfig())

        # Assert
        assert passed, measured
        assert measured["t=0.1"] < measured["t=1.0"]
