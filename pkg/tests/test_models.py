"""Tests for calorex data models."""

import math
from datetime import UTC, datetime

import pytest

from calorex.exceptions import OutOfSupportedRange
from calorex.models import (
    Branch,
    CaloricResult,
    CheckResult,
    DriveCouplings,
    EasyAxisAF,
    EasyPlane,
    ExchangeCouplings,
    ExcursionRow,
    ExternalConditions,
    IntervalSide,
    JumpLimits,
    ManifestEntry,
    Regime,
    RunManifest,
    Suite,
    SweepRow,
    ThermoPoint,
    ValidationReport,
    classify,
    classify_d,
    drive_to_d,
    ferro_free_energy,
)
from calorex.models.sweep import SWEEP_COLUMNS, format_float


class TestClassify:
    """Tests for regime classification."""

    def test_easy_plane(self):
        # Act
        point = classify(0.5)

        # Assert
        assert point.tag is Regime.EASY_PLANE
        assert point.theta == pytest.approx(math.pi / 3, abs=1e-15)
        assert point.phi is None
        assert point.d == pytest.approx(-0.5)

    def test_free_fermion_endpoint(self):
        # Act
        point = classify(0.0)

        # Assert
        assert isinstance(point.regime, EasyPlane)
        assert point.theta == pytest.approx(math.pi / 2)

    def test_isotropic_point_is_easy_plane(self):
        # Act
        point = classify(1.0)

        # Assert
        assert point.tag is Regime.EASY_PLANE
        assert point.theta == 0.0

    def test_easy_axis(self):
        # Act
        point = classify(2.0)

        # Assert
        assert isinstance(point.regime, EasyAxisAF)
        assert point.phi == pytest.approx(math.acosh(2.0), abs=1e-15)
        assert point.theta is None

    @pytest.mark.parametrize("delta", [-0.1, 3.5, math.nan, math.inf])
    def test_out_of_range(self, delta):
        # Act & Assert
        with pytest.raises(OutOfSupportedRange):
            classify(delta)

    def test_classify_d_keeps_d_exactly(self):
        # Arrange
        d = 1e-9

        # Act
        point = classify_d(d)

        # Assert
        assert point.d == d
        assert point.phi == pytest.approx(math.sqrt(2 * d), rel=1e-8)

    def test_classify_d_small_negative_d(self):
        # Arrange
        d = -1e-9

        # Act
        point = classify_d(d)

        # Assert
        assert point.theta == pytest.approx(math.sqrt(-2 * d), rel=1e-8)

    def test_classify_d_matches_classify(self):
        # Act
        a = classify_d(-0.5)
        b = classify(0.5)

        # Assert
        assert a.theta == pytest.approx(b.theta, abs=1e-14)


class TestExchangeCouplings:
    """Tests for ExchangeCouplings."""

    def test_normalized_uses_absolute_j(self):
        # Act
        couplings = ExchangeCouplings(J=-2.0, Jz=3.0)

        # Assert
        assert couplings.delta == pytest.approx(1.5)

    def test_zero_j_raises(self):
        # Act & Assert
        with pytest.raises(OutOfSupportedRange):
            ExchangeCouplings(J=0.0, Jz=1.0).normalized()


class TestDriveToD:
    """Tests for the strain and electric-field renormalization."""

    def test_strain_only(self):
        # Act
        d = drive_to_d(1.0, DriveCouplings(f_zz=1.0), strain=-0.3, field=(0.0, 0.0, 0.0))

        # Assert
        assert d == pytest.approx(0.3, abs=1e-15)

    def test_field_only(self):
        # Arrange
        couplings = DriveCouplings(h_izz=(0.0, 0.0, 0.1))

        # Act
        d = drive_to_d(1.0, couplings, strain=0.0, field=(0.0, 0.0, 2.0))

        # Assert
        assert d == pytest.approx(-0.2, abs=1e-15)

    def test_drives_add_linearly(self):
        # Arrange
        couplings = DriveCouplings(f_zz=0.5, h_izz=(0.1, 0.2, 0.0))

        # Act
        d = drive_to_d(2.0, couplings, strain=0.2, field=(1.0, 1.0, 5.0))

        # Assert
        assert d == pytest.approx(2.0 * (1.0 - 0.1 - 0.3) - 1.0)

    def test_renormalized_out_of_range(self):
        # Act & Assert
        with pytest.raises(OutOfSupportedRange):
            drive_to_d(1.0, DriveCouplings(f_zz=1.0), strain=2.0, field=(0.0, 0.0, 0.0))

    def test_field_needs_three_components(self):
        # Act & Assert
        with pytest.raises(ValueError):
            drive_to_d(1.0, DriveCouplings(), strain=0.0, field=(0.0, 0.0))

    def test_non_finite_couplings_rejected(self):
        # Act & Assert
        with pytest.raises(ValueError):
            DriveCouplings(f_zz=math.nan)


class TestExternalConditions:
    """Tests for ExternalConditions."""

    @pytest.mark.parametrize("t", [0.0, -1.0, math.inf])
    def test_invalid_temperature(self, t):
        # Act & Assert
        with pytest.raises(ValueError):
            ExternalConditions(t=t)


class TestFerroFreeEnergy:
    """Tests for the ferromagnetic mapping."""

    def test_sign_flip(self):
        # Act & Assert
        assert ferro_free_energy(-0.3, 0.5) == 0.3

    def test_rejects_non_positive_temperature(self):
        # Act & Assert
        with pytest.raises(ValueError):
            ferro_free_energy(-0.3, 0.0)


class TestThermoPoint:
    """Tests for ThermoPoint."""

    def test_dict_round_trip_with_vanishing_heat_capacity(self):
        # Arrange
        point = ThermoPoint(
            d=-0.5,
            t=0.5,
            h=0.0,
            f_rel=-0.1,
            entropy=0.3,
            specific_heat=0.0,
            alpha_d=0.01,
            gamma_d=None,
            nematic_b=0.02,
        )

        # Act
        data = point._to_dict()
        restored = ThermoPoint._from_dict(data)

        # Assert
        assert data["S"] == 0.3
        assert data["delta"] == 0.5
        assert restored == point


class TestJumpLimits:
    """Tests for JumpLimits."""

    def test_jump_and_extrapolation(self):
        # Arrange
        limits = JumpLimits(
            t=0.5, d_eps=1e-3, s_minus=0.30, s_plus=0.34, s_minus_half=0.305, s_plus_half=0.335
        )

        # Assert
        assert limits.jump == pytest.approx(0.04)
        assert limits.ratio == pytest.approx(0.34 / 0.30)
        assert limits.extrapolated_jump == pytest.approx(2 * 0.03 - 0.04)


class TestCaloricResult:
    """Tests for CaloricResult."""

    @pytest.mark.parametrize(
        ("d1", "d2", "side"),
        [
            (-0.5, -0.1, IntervalSide.NEGATIVE),
            (0.1, 0.3, IntervalSide.POSITIVE),
            (-0.1, 0.1, IntervalSide.CROSSING),
        ],
    )
    def test_side(self, d1, d2, side):
        # Act
        result = CaloricResult(d1=d1, d2=d2, t_initial=0.5, delta_S=0.0)

        # Assert
        assert result.side is side

    def test_normalized_magnitude(self):
        # Arrange
        result = CaloricResult(d1=-0.1, d2=0.1, t_initial=0.5, delta_S=0.0, delta_t_paper=0.25)

        # Assert
        assert result.normalized_magnitude == pytest.approx(0.2 * 0.25 / 0.5)

    def test_normalized_magnitude_missing(self):
        # Arrange
        result = CaloricResult(d1=-0.1, d2=0.1, t_initial=0.5, delta_S=0.0)

        # Assert
        assert result.normalized_magnitude is None
        assert result._to_dict()["side"] == "crossing"


class TestSweepRows:
    """Tests for sweep and excursion rows."""

    def test_format_float(self):
        # Assert
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(None) == "nan"
        assert format_float(math.nan) == "nan"

    def test_sweep_row_layout(self):
        # Arrange
        row = SweepRow(
            d=0.001,
            t=0.5,
            branch=Branch.PLUS,
            entropy=0.25,
            specific_heat=0.5,
            alpha_d=1.0,
            gamma_d=2.0,
            residual=1e-13,
        )

        # Act
        cells = row._to_row()

        # Assert
        assert len(cells) == len(SWEEP_COLUMNS)
        assert cells[0] == "0.001"
        assert cells[6] == "plus"
        assert row.ok

    def test_failed_row_writes_nan_and_status(self):
        # Arrange
        row = SweepRow(d=-0.2, t=0.1, status="NonConvergence")

        # Act
        cells = row._to_row(with_status=True)

        # Assert
        assert cells[2:6] == ["nan"] * 4
        assert cells[6] == ""
        assert cells[-1] == "NonConvergence"
        assert not row.ok

    def test_sweep_row_from_point(self):
        # Arrange
        point = ThermoPoint(
            d=-0.5,
            t=0.5,
            h=0.0,
            f_rel=-0.1,
            entropy=0.3,
            specific_heat=0.2,
            alpha_d=0.01,
            gamma_d=0.05,
            nematic_b=0.02,
            diagnostics={"residual": 1e-13},
        )

        # Act
        row = SweepRow.from_point(point, seconds=1.5)

        # Assert
        assert row.entropy == 0.3
        assert row.residual == 1e-13
        assert row.branch is Branch.NONE
        assert row.seconds == 1.5

    def test_excursion_row(self):
        # Arrange
        row = ExcursionRow(dd=0.2, t=0.5, delta_t=0.1)

        # Act
        cells = row._to_row()

        # Assert
        assert row.dd_dt_over_t == pytest.approx(0.04)
        assert cells[-1] == "ok"


class TestManifest:
    """Tests for run manifests."""

    def test_dict_round_trip(self):
        # Arrange
        manifest = RunManifest(
            command="sweep",
            version="1.0.0",
            created=datetime(2026, 1, 15, 10, 30, 45, tzinfo=UTC),
            config={"nlie.tol": 1e-12},
            arguments={"t_list": [0.5]},
            entries=[ManifestEntry(row=0, d=-0.5, t=0.5, diagnostics={"iterations": 12})],
            seconds=3.0,
        )

        # Act
        data = manifest._to_dict()
        restored = RunManifest._from_dict(data)

        # Assert
        assert data["created"] == "2026-01-15T10:30:45+00:00"
        assert restored == manifest


class TestValidationReport:
    """Tests for ValidationReport."""

    def test_failures(self):
        # Arrange
        report = ValidationReport(
            suite=Suite.QUICK,
            checks=[
                CheckResult(name="a", passed=True),
                CheckResult(name="b", passed=False, message="boom"),
            ],
        )

        # Assert
        assert not report.passed
        assert [c.name for c in report.failures] == ["b"]
        assert report._to_dict()["checks"][1]["message"] == "boom"
