"""Tests for the integral-equation kernels."""

import math

import numpy as np
import pytest
from scipy import integrate

from calorex.config import CalorexConfig, KernelConfig
from calorex.exceptions import DegenerateRegime, ShiftTooLarge, SlowConvergence
from calorex.models import Regime, classify_d
from calorex.solver.grid import build_grid
from calorex.solver.kernels import (
    KernelCache,
    build_kernel_table,
    c_axis,
    c_plane,
    c_plane_shifted,
    clear_kernel_memo,
    contour_shift,
    g_axis,
    g_axis_shifted,
    g_plane,
    g_plane_shifted,
    plane_multipliers,
    series_terms,
    strip_width,
)


@pytest.fixture(autouse=True)
def _fresh_memo():
    clear_kernel_memo()
    yield
    clear_kernel_memo()


class TestContourShift:
    """Tests for strip widths and contour shifts."""

    def test_strip_width(self):
        # Assert
        assert strip_width(Regime.EASY_PLANE, 0.4) == 0.4
        assert strip_width(Regime.EASY_AXIS, 0.4) == 0.8

    def test_shift_is_strip_minus_eps(self):
        # Act
        shift = contour_shift(Regime.EASY_AXIS, 0.5, 0.25)

        # Assert
        assert shift == pytest.approx(0.75)

    @pytest.mark.parametrize("eps", [0.0, -0.1, 0.5, 0.7])
    def test_shift_outside_strip_raises(self, eps):
        # Act & Assert
        with pytest.raises(ShiftTooLarge) as exc:
            contour_shift(Regime.EASY_PLANE, 0.5, eps)
        assert exc.value.diagnostics["strip"] == 0.5


class TestEasyPlaneKernels:
    """Tests for the easy-plane kernels."""

    def test_c_plane_at_origin(self):
        # Act & Assert
        assert c_plane(0.0, math.pi / 3) == pytest.approx(1.5 / math.pi)

    def test_c_plane_integrates_to_one_half(self):
        # Arrange
        theta = 0.7

        # Act
        value, _ = integrate.quad(lambda x: c_plane(x, theta), -np.inf, np.inf)

        # Assert
        assert value == pytest.approx(0.5, abs=1e-10)

    def test_c_plane_vectorized(self):
        # Arrange
        x = np.linspace(-3.0, 3.0, 7)

        # Act
        values = c_plane(x, 0.5)

        # Assert
        assert values.shape == x.shape
        np.testing.assert_allclose(values, values[::-1])

    def test_shifted_c_plane_conjugate_pairs(self):
        # Arrange
        x = np.linspace(-3.0, 3.0, 13)

        # Act
        up = c_plane_shifted(x, 0.8, 0.2)
        down = c_plane_shifted(x, 0.8, -0.2)

        # Assert
        np.testing.assert_allclose(down, up.conj(), atol=1e-15)
        np.testing.assert_allclose(c_plane_shifted(x, 0.8, 0.0), c_plane(x, 0.8), atol=1e-15)

    def test_shifted_c_plane_matches_cosh_form(self):
        # Arrange
        theta, eta, x = 0.8, 0.2, 0.6

        # Act
        value = c_plane_shifted(x, theta, eta)

        # Assert
        expected = 1.0 / (2.0 * theta * np.cosh(math.pi * complex(x, eta) / theta))
        assert value == pytest.approx(expected, abs=1e-14)

    def test_shifted_c_plane_keeps_its_integral(self):
        # Arrange
        theta, eta = 0.7, 0.3

        # Act
        re, _ = integrate.quad(lambda x: c_plane_shifted(x, theta, eta).real, -np.inf, np.inf)
        im, _ = integrate.quad(lambda x: c_plane_shifted(x, theta, eta).imag, -np.inf, np.inf)

        # Assert
        assert re == pytest.approx(0.5, abs=1e-9)
        assert im == pytest.approx(0.0, abs=1e-9)

    def test_shifted_c_plane_rejects_pole_strip(self):
        # Act & Assert
        with pytest.raises(ShiftTooLarge):
            c_plane_shifted(0.0, 0.8, 0.4)

    def test_g_vanishes_at_free_fermion_point(self):
        # Act & Assert
        assert g_plane(0.3, math.pi / 2) == 0.0
        assert g_plane_shifted(0.3, math.pi / 2, 0.5, 1) == 0j

    @pytest.mark.parametrize("x", [0.0, 0.4, 2.5])
    def test_quadrature_schemes_agree(self, x):
        # Arrange
        theta = math.pi / 3

        # Act
        qawf = g_plane(x, theta, method="qawf")
        truncated = g_plane(x, theta, method="truncated")

        # Assert
        assert qawf == pytest.approx(truncated, abs=1e-10)

    def test_zero_mode(self):
        # Arrange
        theta = math.pi / 3

        # Act
        _, g_hat = plane_multipliers(np.array([0.0]), theta)
        value, _ = integrate.quad(lambda x: g_plane(x, theta), -15.0, 15.0, limit=200)

        # Assert
        expected = (math.pi - 2 * theta) / (2 * (math.pi - theta))
        assert g_hat[0] == pytest.approx(expected)
        assert value == pytest.approx(expected, abs=1e-8)

    def test_shifted_kernel_symmetry(self):
        # Arrange
        theta, eps = math.pi / 3, math.pi / 6

        # Act
        minus = g_plane_shifted(0.7, theta, eps, 1)
        plus = g_plane_shifted(0.7, theta, eps, -1)
        mirrored = g_plane_shifted(-0.7, theta, eps, 1)

        # Assert
        assert plus == pytest.approx(minus.conjugate(), abs=1e-12)
        assert mirrored == pytest.approx(minus.conjugate(), abs=1e-12)

    def test_shifted_kernel_rejects_large_shift(self):
        # Act & Assert
        with pytest.raises(ShiftTooLarge):
            g_plane_shifted(0.0, 0.5, 0.6, 1)

    def test_degenerate_theta(self):
        # Act & Assert
        with pytest.raises(DegenerateRegime):
            c_plane(0.0, 0.0)


class TestEasyAxisKernels:
    """Tests for the easy-axis kernels."""

    def test_series_terms_grow_as_rate_shrinks(self):
        # Act
        fast = series_terms(1.0)
        slow = series_terms(0.01)

        # Assert
        assert fast < slow
        assert 2.0 * math.exp(-fast * 1.0) / (-math.expm1(-1.0)) < 1e-14

    def test_series_cap(self):
        # Act & Assert
        with pytest.raises(SlowConvergence) as exc:
            series_terms(1e-3, KernelConfig(series_cap=100))
        assert exc.value.diagnostics["cap"] == 100

    def test_c_axis_integrates_to_one_half(self):
        # Arrange
        phi = math.acosh(2.0)
        x = np.linspace(-math.pi, math.pi, 512, endpoint=False)

        # Act
        total = c_axis(x, phi).sum() * (2 * math.pi / 512)

        # Assert
        assert total == pytest.approx(0.5, abs=1e-12)

    def test_g_axis_zero_mode(self):
        # Arrange
        phi = 0.8
        x = np.linspace(-math.pi, math.pi, 512, endpoint=False)

        # Act
        total = g_axis(x, phi).sum() * (2 * math.pi / 512)

        # Assert
        assert total == pytest.approx(0.5, abs=1e-12)

    def test_shifted_series_is_conjugate_in_sign(self):
        # Arrange
        phi, eps = 0.8, 0.8

        # Act
        minus = g_axis_shifted(0.3, phi, eps, 1)
        plus = g_axis_shifted(0.3, phi, eps, -1)

        # Assert
        assert plus == pytest.approx(minus.conjugate())
        assert minus.imag != 0.0

    def test_shifted_series_rejects_large_shift(self):
        # Act & Assert
        with pytest.raises(ShiftTooLarge):
            g_axis_shifted(0.0, 0.5, 1.0, 1)


class TestKernelTable:
    """Tests for kernels sampled on solver grids."""

    def test_plane_table_matches_quadrature(self):
        # Arrange
        config = CalorexConfig()
        point = classify_d(-0.5)
        grid = build_grid(point, 0.5, config)

        # Act
        table = build_kernel_table(point, grid, config)
        centre = grid.n_points // 2
        index = centre + round(0.5 / grid.spacing)

        # Assert
        assert grid.x[centre] == 0.0
        assert table.g[centre] == pytest.approx(g_plane(0.0, point.theta), abs=1e-8)
        expected = g_plane_shifted(grid.x[index], point.theta, table.eps, 1)
        assert table.g_minus[index] == pytest.approx(expected, abs=1e-7)
        assert table.zero_mode == pytest.approx(0.25)

    def test_axis_table_matches_series(self):
        # Arrange
        config = CalorexConfig()
        point = classify_d(1.0)
        grid = build_grid(point, 0.5, config)

        # Act
        table = build_kernel_table(point, grid, config)

        # Assert
        assert grid.periodic
        np.testing.assert_allclose(table.c, c_axis(grid.x, point.phi), atol=1e-12)
        np.testing.assert_allclose(table.g, g_axis(grid.x, point.phi), atol=1e-12)

    def test_axis_table_shifted_driving(self):
        # Arrange
        config = CalorexConfig()
        point = classify_d(1.0)
        grid = build_grid(point, 0.5, config)
        n = np.arange(1, 200)

        # Act
        table = build_kernel_table(point, grid, config)

        # Assert
        z = grid.x + 0.5j * table.eps
        series = np.cos(np.multiply.outer(z, n)) / np.cosh(n * point.phi)
        expected = (0.5 + series.sum(axis=1)) / (2.0 * math.pi)
        np.testing.assert_allclose(table.c_up, expected, atol=1e-12)
        np.testing.assert_allclose(table.c_down, expected.conj(), atol=1e-12)

    def test_plane_table_shifted_driving(self):
        # Arrange
        config = CalorexConfig()
        point = classify_d(-0.5)
        grid = build_grid(point, 0.5, config)

        # Act
        table = build_kernel_table(point, grid, config)

        # Assert
        expected = c_plane_shifted(grid.x, point.theta, 0.5 * table.eps)
        np.testing.assert_allclose(table.c_up, expected, atol=1e-15)
        assert abs(grid.integrate(table.c_up) - 0.5) < 1e-10

    def test_tables_are_memoized(self):
        # Arrange
        config = CalorexConfig()
        point = classify_d(-0.5)
        grid = build_grid(point, 0.5, config)

        # Act
        first = build_kernel_table(point, grid, config)
        second = build_kernel_table(point, grid, config)

        # Assert
        assert first is second

    def test_regime_mismatch_raises(self):
        # Arrange
        grid = build_grid(classify_d(1.0), 0.5)

        # Act & Assert
        with pytest.raises(ValueError):
            build_kernel_table(classify_d(-0.5), grid)

    def test_disk_cache_round_trip(self, tmp_path):
        # Arrange
        config = CalorexConfig().with_overrides({"kernels.cache_dir": str(tmp_path)})
        point = classify_d(0.5)
        grid = build_grid(point, 0.5, config)
        built = build_kernel_table(point, grid, config)
        clear_kernel_memo()

        # Act
        loaded = build_kernel_table(point, grid, config)

        # Assert
        assert loaded is not built
        assert len(list(tmp_path.glob("*.clxk"))) == 1
        np.testing.assert_array_equal(loaded.g_minus, built.g_minus)
        assert loaded.zero_mode == built.zero_mode


class TestKernelCache:
    """Tests for the on-disk cache format."""

    def test_store_and_load(self, tmp_path):
        # Arrange
        cache = KernelCache(tmp_path)
        values = np.linspace(0.0, 1.0, 11)

        # Act
        path = cache.store("abc", values)
        loaded = cache.load("abc", expected=11)

        # Assert
        assert path.read_bytes()[:4] == b"CLXK"
        np.testing.assert_array_equal(loaded, values)

    def test_missing_key(self, tmp_path):
        # Act & Assert
        assert KernelCache(tmp_path).load("nothing") is None

    def test_wrong_count_is_ignored(self, tmp_path):
        # Arrange
        cache = KernelCache(tmp_path)
        cache.store("abc", np.zeros(4))

        # Act & Assert
        assert cache.load("abc", expected=5) is None

    def test_other_version_is_ignored(self, tmp_path):
        # Arrange
        cache = KernelCache(tmp_path)
        path = cache.store("abc", np.zeros(4))
        raw = bytearray(path.read_bytes())
        raw[4] = 99
        path.write_bytes(bytes(raw))

        # Act & Assert
        assert cache.load("abc") is None
