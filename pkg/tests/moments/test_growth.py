"""Tests for moment growth rates."""

import math

import numpy as np
import pytest

from tarstab.collapsed import estimate_lyapunov
from tarstab.errors import ConfigError
from tarstab.model import arch, tar_arch1, tarch_delay1
from tarstab.moments import (
    MomentVerdict,
    default_starts,
    fit_rate,
    growth_rate,
    order1_analysis,
    rate_verdict,
)

POLES = np.array([[-1.0], [1.0]])


class TestRateVerdict:
    def test_classes(self):
        assert rate_verdict(0.8, 0.01) is MomentVerdict.FINITE
        assert rate_verdict(1.2, 0.01) is MomentVerdict.INFINITE
        assert rate_verdict(1.01, 0.01) is MomentVerdict.INCONCLUSIVE


class TestFitRate:
    def test_exact_geometric_tables(self):
        ns = np.arange(1, 21)
        table = np.stack([np.vstack([0.3 + ns * math.log(0.7), 0.1 + ns * math.log(0.7)])] * 3)
        log_rate, se, pooled = fit_rate(table)
        assert log_rate == pytest.approx(math.log(0.7))
        assert se == pytest.approx(0.0, abs=1e-12)
        assert pooled == pytest.approx(0.3 + ns * math.log(0.7))


class TestDefaultStarts:
    def test_order1_poles(self, stream, gaussian):
        assert np.array_equal(default_starts(arch([0.5]), gaussian, stream), POLES)

    def test_grid_plus_stationary(self, stream, gaussian):
        starts = default_starts(arch([0.5, 0.4]), gaussian, stream, grid_size=32, stationary=8)
        assert starts.shape == (40, 2)
        assert np.allclose(np.linalg.norm(starts, axis=1), 1.0)


class TestGrowthRate:
    def test_arch1_rate(self, stream, gaussian):
        g = growth_rate(arch([0.8]), gaussian, 2.0, 20, 4, POLES, stream, particles=2000)
        assert abs(g.rate - 0.64) < 4 * g.stderr + 0.01
        assert g.verdict is MomentVerdict.FINITE
        assert list(g.table.columns) == ["n", "log_moment", "g_n"]
        assert g.to_dict()["sup_is_lower_bound"] is True

    def test_arch2_rate_is_spectral_radius(self, stream, gaussian):
        # E(ξ_t² | past) = Σ b_i² ξ_{t-i}², so the rate is the root of λ² = 0.25λ + 0.25.
        expected = (0.25 + math.sqrt(1.0625)) / 2
        g = growth_rate(
            arch([0.5, 0.5]), gaussian, 2.0, 20, 4, None, stream, particles=1000
        )
        assert g.rate == pytest.approx(expected, abs=0.05)

    def test_order1_matches_two_state_form(self, stream, gaussian):
        exact = order1_analysis(0.3, -0.2, 0.5, 0.7, gaussian, 2.0).moment_rate
        g = growth_rate(
            tar_arch1(0.3, -0.2, 0.5, 0.7), gaussian, 2.0, 20, 6, POLES, stream, particles=2000
        )
        assert abs(g.rate - exact) < 4 * g.stderr + 0.01

    def test_small_r_recovers_log_rho(self, stream, gaussian):
        r = 1e-3
        g = growth_rate(arch([1.0]), gaussian, r, 20, 4, POLES, stream, particles=4000)
        slope = (g.rate - 1) / r
        assert slope == pytest.approx(-0.635181, rel=0.05, abs=4 * g.stderr / r)

    def test_small_r_threshold_model(self, stream, gaussian):
        r = 1e-3
        log_rho = order1_analysis(0.3, -0.2, 0.5, 0.7, gaussian, 2.0).log_rho
        spec = tar_arch1(0.3, -0.2, 0.5, 0.7)
        g = growth_rate(spec, gaussian, r, 20, 4, POLES, stream, particles=4000)
        slope = (g.rate - 1) / r
        assert slope == pytest.approx(log_rho, rel=0.05, abs=4 * g.stderr / r)

    @pytest.mark.slow
    def test_small_r_two_lags(self, stream, gaussian):
        spec = arch([0.5, 0.5])
        r = 1e-3
        log_rho = estimate_lyapunov(spec, gaussian, 100_000, 1_000, stream.child("lyap"))
        g = growth_rate(spec, gaussian, r, 20, 4, None, stream.child("g"), particles=1000)
        tol = 0.05 * abs(log_rho.mean_logw) + 4 * (g.stderr / r + log_rho.stderr)
        assert abs((g.rate - 1) / r - log_rho.mean_logw) < tol

    @pytest.mark.slow
    @pytest.mark.parametrize(
        ("b", "verdict"), [(0.6, MomentVerdict.FINITE), (0.8, MomentVerdict.INFINITE)]
    )
    def test_tarch_boundary(self, stream, gaussian, b, verdict):
        spec = tarch_delay1([b, b], [b, b])
        g = growth_rate(spec, gaussian, 2.0, 20, 4, None, stream, particles=500)
        assert g.verdict is verdict

    def test_validation(self, stream, gaussian):
        with pytest.raises(ConfigError):
            growth_rate(arch([0.5]), gaussian, 2.0, 10, 4, POLES, stream)
        with pytest.raises(ConfigError):
            growth_rate(arch([0.5]), gaussian, 2.0, 20, 1, POLES, stream)
